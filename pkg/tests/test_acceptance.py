"""Acceptance gate: one criterion per test, each printing a PASS/FAIL line.

Run with plain pytest; the criterion lines are printed outside the capture so
they always appear in the log.
"""

import random
import time

import pytest

from awarekit.formula import Lang, Top, atoms_of, enumerate_formulas, parse
from awarekit.fh import check_ka, check_pp
from awarekit.hms import DenotationEvaluator, validate_model
from awarekit.klm import (
    check_awareness_properties,
    eval_L,
    eval_LKA,
    induced_pointwise,
)
from awarekit.kripke import WorldId, relation_properties
from awarekit.modelio import load_fixture
from awarekit.transforms import fh_transform, h_transform, k_transform, l_transform
from awarekit.truth import Truth, truth_of
from awarekit.verify import (
    SCHEMA_5,
    check_axiom_suite,
    check_equiv_fh_klm,
    check_L_equiv_hms_klm,
    check_L_equiv_klm_hms,
    hms_suite,
    lga_suite,
    random_klm,
    random_klm_eq,
)

import test_properties

FRAME_CHECKS = ("lattice", "projections", "Conf", "Gref", "Stat", "PPI", "PPK")


@pytest.fixture(scope="module")
def trade():
    return load_fixture("trade.klm.json")


@pytest.fixture(scope="module")
def trade_fh():
    return load_fixture("trade.fh.json")


def announce(capsys, number, label, passed, elapsed):
    with capsys.disabled():
        verdict = "PASS" if passed else "FAIL"
        print(f"CRITERION {number} [{label}]: {verdict} ({elapsed:.1f}s)")
    assert passed, f"criterion {number} failed"


def test_criterion_1_fixture_truths(trade, capsys):
    t0 = time.time()
    w1 = WorldId("w1", frozenset({"i", "l"}))
    w2 = WorldId("w2", frozenset({"i", "l"}))
    checks = [
        eval_L(trade, w1, parse("K{b} i", Lang.L)) is Truth.TRUE,
        eval_L(trade, w1, parse("K{b} l", Lang.L)) is Truth.TRUE,
        eval_L(trade, w1, parse("K{o} i", Lang.L)) is Truth.FALSE,
        eval_LKA(trade, w1, parse("A{o} i")) is Truth.TRUE,
        eval_LKA(trade, w2, parse("A{b} l")) is Truth.FALSE,
    ]
    elapsed = time.time() - t0
    announce(capsys, 1, "fixture truths", all(checks) and elapsed < 1.0, elapsed)


def test_criterion_2_transform_well_formedness(trade, trade_fh, capsys):
    t0 = time.time()
    hms = h_transform(trade)
    ok = validate_model(hms).all_pass(*FRAME_CHECKS)

    klm, _ = l_transform(hms)
    report = check_awareness_properties(
        klm.base, induced_pointwise(klm.base, klm.awareness))
    ok &= report.all_pass("D", "II", "NS")
    ok &= all(flags["equivalence"]
              for flags in relation_properties(klm.base).values())

    back = k_transform(trade_fh)
    report = check_awareness_properties(
        back.base, induced_pointwise(back.base, back.awareness))
    ok &= report.all_pass("D", "II", "NS")

    fh = fh_transform(trade)
    ok &= check_pp(fh)["passed"]
    ok &= check_ka(fh)[0]
    elapsed = time.time() - t0
    announce(capsys, 2, "transform well-formedness", ok and elapsed < 1.0, elapsed)


def test_criterion_3_L_equivalence_depth_3(trade, capsys):
    t0 = time.time()
    hms = h_transform(trade)
    r1 = check_L_equiv_klm_hms(trade, 3)
    r2 = check_L_equiv_hms_klm(hms, 3)
    ok = not r1.failures and not r2.failures and r1.checked > 0 and r2.checked > 0
    elapsed = time.time() - t0
    announce(capsys, 3, "L-equivalence depth 3", ok and elapsed < 180, elapsed)


def test_criterion_4_fh_equivalence_depth_3(trade, trade_fh, capsys):
    t0 = time.time()
    ok = True
    for lang in (Lang.L, Lang.LKA):
        for x in (trade_fh, trade):
            report = check_equiv_fh_klm(x, lang, 3)
            ok &= not report.failures and report.checked > 0
    elapsed = time.time() - t0
    announce(capsys, 4, "FH equivalence depth 3", ok and elapsed < 180, elapsed)


def test_criterion_5_randomized_soundness(capsys):
    t0 = time.time()
    ok = True
    rng = random.Random(11)
    for _ in range(200):
        report = check_axiom_suite([random_klm_eq(rng)], hms_suite(), 1,
                                   check_rules=False)
        ok &= report["passed"]
    rng = random.Random(12)
    for _ in range(200):
        report = check_axiom_suite([random_klm(rng)], lga_suite(), 1,
                                   check_rules=False)
        ok &= report["passed"]
    elapsed = time.time() - t0
    announce(capsys, 5, "randomized soundness", ok and elapsed < 300, elapsed)


def test_criterion_6_negative_control(trade, capsys):
    t0 = time.time()
    report = check_axiom_suite([trade], hms_suite(), 1,
                               extra_schemas=(SCHEMA_5,), check_rules=False)
    entry = report["schemas"]["5"]
    ok = not entry["passed"]
    first = entry["failures"][0] if entry["failures"] else {}
    ok &= first.get("state") == "w2@{i,l}"
    ok &= first.get("formula") == "~(~K{b} l & ~K{b} ~K{b} l)"
    # the rest of the suite still passes
    ok &= all(e["passed"] for sid, e in report["schemas"].items() if sid != "5")
    elapsed = time.time() - t0
    announce(capsys, 6, "negative control schema 5", ok, elapsed)


def test_criterion_7_structural_invariants(capsys):
    t0 = time.time()
    ok = True
    for check in (test_properties.test_restriction_lattice_mirroring,
                  test_properties.test_event_partition_law,
                  test_properties.test_introspective_idempotence_iff_monotone,
                  test_properties.test_no_surprises_iff_product_form,
                  test_properties.test_undefined_iff_atoms_escape_vocabulary):
        try:
            check()
        except AssertionError:
            ok = False
    elapsed = time.time() - t0
    announce(capsys, 7, "structural invariants", ok, elapsed)


# --------------------------------------------------------------------------
# criterion 8: an independent, directly recursive three-valued evaluator,
# written against the satisfaction clauses rather than the event algebra


def _direct_eval(m, f, s, memo):
    fr = m.frame
    space = fr.state_space[s]
    for p in atoms_of(f):
        if not fr.below(m.valuation[p].base_space, space):
            return Truth.UNDEFINED
    return truth_of(_direct_true(m, f, s, memo))


def _direct_true(m, f, s, memo):
    key = (f, s)
    got = memo.get(key)
    if got is None:
        fr = m.frame
        if isinstance(f, Top):
            got = True
        elif type(f).__name__ == "Atom":
            e = m.valuation[f.name]
            got = fr.project(s, e.base_space) in e.base_set
        elif type(f).__name__ == "Not":
            got = not _direct_true(m, f.child, s, memo)
        elif type(f).__name__ == "And":
            got = _direct_true(m, f.left, s, memo) and \
                _direct_true(m, f.right, s, memo)
        else:  # Know
            got = all(_direct_eval(m, f.child, t, memo) is Truth.TRUE
                      for t in fr.pi[f.agent][s])
        memo[key] = got
    return got


def test_criterion_8_oracle_agreement(trade, capsys):
    t0 = time.time()
    m = h_transform(trade)
    ev = DenotationEvaluator(m)
    memo = {}
    formulas = enumerate_formulas(["i", "l"], ["b", "o"], 3, Lang.L)
    states = sorted(m.frame.state_space)
    disagreements = 0
    for f in formulas:
        for s in states:
            if ev.value(f, s) is not _direct_eval(m, f, s, memo):
                disagreements += 1
    ok = disagreements == 0
    elapsed = time.time() - t0
    announce(capsys, 8, "denotation vs direct oracle", ok, elapsed)
