"""Proposition-level harness: satisfaction preservation across the transforms,
guarded validity, axiom suites, and random model generation.

Inference rules are checked as validity preservation over the supplied finite
model corpus. That is a necessary condition for soundness, not a proof, and
the reports label it as such.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .fh import FHEvaluator, FHModel, aware_of, check_ka, check_pp
from .formula import (
    And,
    Atom,
    Aware,
    ExplicitKnow,
    Formula,
    Know,
    Lang,
    Not,
    TOP,
    Top,
    atoms_of,
    conj,
    enumerate_formulas,
    expand_defined,
    iff,
    implies,
    in_language,
    lor,
    to_text,
)
from .hms import DenotationEvaluator, HMSModel, defined_atoms
from .klm import Evaluator, KripkeLatticeModel, subsets, validate_klm
from .kripke import KripkeModel, WorldId, relation_properties
from .transforms import fh_transform, k_transform, l_transform
from .truth import Truth, truth_of

INSTANTIATION_CAP = 10 ** 6


@dataclass
class EquivalenceReport:
    kind: str
    depth: int
    checked: int = 0
    failures: list = field(default_factory=list)

    def record(self, formula, state, left, right):
        self.failures.append(
            {"formula": to_text(formula), "state": str(state),
             "left": str(left), "right": str(right)}
        )

    @property
    def agreements(self):
        return self.checked - len(self.failures)

    @property
    def first_disagreement(self):
        return self.failures[0] if self.failures else None

    def to_json(self):
        return {"kind": self.kind, "depth": self.depth,
                "checked": self.checked, "failures": self.failures}


def _require_partitional(k):
    for a, flags in relation_properties(k.base).items():
        if not flags["equivalence"]:
            raise ValueError(f"relation of agent {a!r} is not an equivalence relation")


# ---------------------------------------------------------------------------
# satisfaction-preservation checks


def check_L_equiv_hms_klm(m: HMSModel, depth: int) -> EquivalenceReport:
    """Agreement of the lattice model built from m with m itself, at every
    corresponding world copy of every state."""
    klm, corr = l_transform(m)
    report = EquivalenceReport("equivalence", depth)
    formulas = enumerate_formulas(m.atoms, m.frame.agents, depth, Lang.L)
    ev_hms = DenotationEvaluator(m)
    ev_klm = Evaluator(klm, Lang.L)
    for f in formulas:
        for s in sorted(m.frame.state_space):
            left = ev_hms.value(f, s)
            for v in sorted(corr[s], key=WorldId.sort_key):
                right = ev_klm.value(f, v)
                report.checked += 1
                if left is not right:
                    report.record(f, f"{s}/{v}", left, right)
        if report.checked > INSTANTIATION_CAP:
            break
    return report


def check_L_equiv_klm_hms(k: KripkeLatticeModel, depth: int) -> EquivalenceReport:
    """Agreement of k with its space-lattice transform at every w_X."""
    from .transforms import h_transform

    _require_partitional(k)
    hms = h_transform(k)
    report = EquivalenceReport("equivalence", depth)
    formulas = enumerate_formulas(k.base.atoms, k.base.agents, depth, Lang.L)
    ev_klm = Evaluator(k, Lang.L)
    ev_hms = DenotationEvaluator(hms)
    omega = k.omega()
    for f in formulas:
        for w in omega:
            left = ev_klm.value(f, w)
            right = ev_hms.value(f, str(w))
            report.checked += 1
            if left is not right:
                report.record(f, w, left, right)
        if report.checked > INSTANTIATION_CAP:
            break
    return report


def check_equiv_fh_klm(x, lang: Lang, depth: int) -> EquivalenceReport:
    """Agreement between an awareness structure and its lattice counterpart
    (either direction), at world copies w_X with X covering the formula's
    atoms. Both semantics are two-valued there."""
    if isinstance(x, FHModel):
        ok, witnesses = check_ka(x)
        if not ok:
            raise ValueError(f"awareness is not constant along the relations: {witnesses[0]}")
        fh, klm = x, k_transform(x)
    elif isinstance(x, KripkeLatticeModel):
        fh, klm = fh_transform(x), x
    else:
        raise TypeError(f"expected an FH or Kripke lattice model, got {type(x).__name__}")
    report = EquivalenceReport("equivalence", depth)
    formulas = enumerate_formulas(klm.base.atoms, klm.base.agents, depth, lang)
    ev_fh = FHEvaluator(fh, lang)
    ev_klm = Evaluator(klm, lang)
    vocabularies = subsets(klm.base.atoms)
    for f in formulas:
        at = atoms_of(f)
        covering = [X for X in vocabularies if at <= X]
        for w in sorted(klm.base.worlds):
            right = truth_of(ev_fh.value(f, w))
            for X in covering:
                left = ev_klm.value(f, WorldId(w, X))
                report.checked += 1
                if left is not right:
                    report.record(f, WorldId(w, X), left, right)
        if report.checked > INSTANTIATION_CAP:
            break
    return report


# ---------------------------------------------------------------------------
# validity


SEMANTICS = ("HMS", "KLM_L", "KLM_LKA", "FH_L", "FH_LKA")


class _Slot(Formula):
    """Mutable placeholder leaf for schema skeletons. A skeleton is built once
    per schema and agent tuple; per metavariable filling only the slots'
    precomputed true masks and atom sets are swapped in."""

    __slots__ = ("mask", "atoms")


class _KlmSetEvaluator:
    """Computes, per formula, the bitmask of lattice states where it is True.

    States are indexed in omega order; masks are Python ints. Each distinct
    subformula is evaluated once per model, which makes large schema
    instantiation sweeps cheap compared to per-state recursion.
    """

    def __init__(self, k: KripkeLatticeModel, lang: Lang):
        self.k = k
        self.lang = lang
        self.states = k.omega()
        self.index = {s: i for i, s in enumerate(self.states)}
        n = len(self.states)
        self.full = (1 << n) - 1
        self.atom_defined = {}
        self.atom_true = {}
        for p in k.base.atoms:
            d = t = 0
            holds = k.base.valuation[p]
            for i, s in enumerate(self.states):
                if p in s.vocabulary:
                    d |= 1 << i
                    if s.base in holds:
                        t |= 1 << i
            self.atom_defined[p] = d
            self.atom_true[p] = t
        self.base_mask = {}
        for i, s in enumerate(self.states):
            self.base_mask[s.base] = self.base_mask.get(s.base, 0) | (1 << i)
        top = frozenset(k.base.atoms)
        self.top_index = {w: self.index[WorldId(w, top)] for w in k.base.worlds}
        self.succ = {
            a: {w: sorted(k.base.successors(a, w)) for w in k.base.worlds}
            for a in k.base.agents
        }
        self.aware_atom = {}
        for a in k.base.agents:
            per = {}
            for p in k.base.atoms:
                m = 0
                for i, s in enumerate(self.states):
                    if p in k.awareness[a][s.base]:
                        m |= 1 << i
                per[p] = m
            self.aware_atom[a] = per
        self._memo = {}

    def defined_mask(self, atom_set):
        m = self.full
        for p in atom_set:
            m &= self.atom_defined[p]
        return m

    def true_mask(self, f: Formula) -> int:
        got = self._memo.get(f)
        if got is None:
            got = self._true_mask(f)
            self._memo[f] = got
        return got

    def _true_mask(self, f):
        if isinstance(f, Not):
            return self.defined_mask(atoms_of(f.child)) & ~self.true_mask(f.child)
        if isinstance(f, And):
            return self.true_mask(f.left) & self.true_mask(f.right)
        if isinstance(f, Atom):
            return self.atom_true[f.name]
        if isinstance(f, Know):
            if self.lang is Lang.L:
                return self._know_explicit_mask(f)
            return self._know_implicit_mask(f)
        if isinstance(f, Aware):
            if self.lang is not Lang.LKA:
                raise ValueError("Aware is not a grammar node of L; expand it first")
            m = self.defined_mask(atoms_of(f.child))
            per = self.aware_atom[f.agent]
            for p in atoms_of(f.child):
                m &= per[p]
            return m
        if isinstance(f, Top):
            return self.full
        if isinstance(f, ExplicitKnow):
            return self.true_mask(expand_defined(f, Lang.LKA))
        raise TypeError(f"not a formula: {f!r}")

    def _know_implicit_mask(self, f):
        return self.know_implicit_mask(
            f.agent, self.true_mask(f.child), atoms_of(f.child))

    def know_implicit_mask(self, agent, child, at):
        succ = self.succ[agent]
        spread = 0
        for w, vs in succ.items():
            if all((child >> self.top_index[v]) & 1 for v in vs):
                spread |= self.base_mask[w]
        return self.defined_mask(at) & spread

    def _know_explicit_mask(self, f):
        return self.know_explicit_mask(
            f.agent, self.true_mask(f.child), atoms_of(f.child))

    def know_explicit_mask(self, agent, child, at):
        succ = self.succ[agent]
        aw = self.k.awareness[agent]
        index = self.index
        out = 0
        for i, s in enumerate(self.states):
            if not at <= s.vocabulary:
                continue
            Y = s.vocabulary & aw[s.base]
            if all((child >> index[WorldId(v, Y)]) & 1 for v in succ[s.base]):
                out |= 1 << i
        return out

    def slot_mask(self, f):
        """(true mask, atom set) for a schema skeleton whose leaves may be
        _Slot placeholders carrying precomputed masks. Allocation-free per
        instantiation, which keeps large schema sweeps fast."""
        if type(f) is _Slot:
            return f.mask, f.atoms
        if isinstance(f, Not):
            t, at = self.slot_mask(f.child)
            return self.defined_mask(at) & ~t, at
        if isinstance(f, And):
            tl, al = self.slot_mask(f.left)
            tr, ar = self.slot_mask(f.right)
            return tl & tr, al | ar
        if isinstance(f, Know):
            t, at = self.slot_mask(f.child)
            if self.lang is Lang.L:
                return self.know_explicit_mask(f.agent, t, at), at
            return self.know_implicit_mask(f.agent, t, at), at
        if isinstance(f, Aware):
            t, at = self.slot_mask(f.child)
            return self._aware_slot_mask(f.agent, t, at), at
        if isinstance(f, ExplicitKnow):
            if self.lang is not Lang.LKA:
                raise ValueError("ExplicitKnow is not a grammar node of L")
            t, at = self.slot_mask(f.child)
            return (self._aware_slot_mask(f.agent, t, at)
                    & self.know_implicit_mask(f.agent, t, at)), at
        if isinstance(f, Top):
            return self.full, frozenset()
        if isinstance(f, Atom):
            return self.atom_true[f.name], frozenset((f.name,))
        raise TypeError(f"not a formula: {f!r}")

    def _aware_slot_mask(self, agent, t, at):
        if self.lang is Lang.LKA:
            m = self.defined_mask(at)
            per = self.aware_atom[agent]
            for p in at:
                m &= per[p]
            return m
        # under L, A_a f abbreviates K_a f or K_a not K_a f
        d = self.defined_mask(at)
        k1 = self.know_explicit_mask(agent, t, at)
        k2 = self.know_explicit_mask(agent, d & ~k1, at)
        return d & (k1 | k2)

    def check_skeleton(self, skeleton):
        """True iff the skeleton instance is guarded-valid on this model."""
        t, at = self.slot_mask(skeleton)
        return not (self.defined_mask(at) & ~t)

    def check(self, g: Formula):
        """Guarded validity of an expanded formula; witnesses in state order."""
        defined = self.defined_mask(atoms_of(g))
        bad = defined & ~self.true_mask(g)
        if not bad:
            return True, []
        return False, [self.states[i] for i in range(bad.bit_length()) if (bad >> i) & 1]


class _FhSetEvaluator:
    """World-set evaluator for the two-valued awareness-structure semantics."""

    def __init__(self, s: FHModel, lang: Lang):
        self.s = s
        self.lang = lang
        self.worlds = sorted(s.base.worlds)
        self.index = {w: i for i, w in enumerate(self.worlds)}
        self.full = (1 << len(self.worlds)) - 1
        self.succ = {
            a: {w: sorted(s.base.successors(a, w)) for w in self.worlds}
            for a in s.base.agents
        }
        self._memo = {}

    def true_mask(self, f: Formula) -> int:
        got = self._memo.get(f)
        if got is None:
            got = self._true_mask(f)
            self._memo[f] = got
        return got

    def _aware_mask(self, agent, child):
        out = 0
        for i, w in enumerate(self.worlds):
            if aware_of(self.s, agent, w, child):
                out |= 1 << i
        return out

    def _true_mask(self, f):
        s = self.s
        if isinstance(f, Top):
            return self.full
        if isinstance(f, Atom):
            try:
                holds = s.base.valuation[f.name]
            except KeyError:
                raise KeyError(f"atom {f.name!r} is outside the model's language") from None
            return sum(1 << i for i, w in enumerate(self.worlds) if w in holds)
        if isinstance(f, Not):
            return self.full & ~self.true_mask(f.child)
        if isinstance(f, And):
            return self.true_mask(f.left) & self.true_mask(f.right)
        if isinstance(f, Know):
            child = self.true_mask(f.child)
            out = 0
            for i, w in enumerate(self.worlds):
                if all((child >> self.index[v]) & 1 for v in self.succ[f.agent][w]):
                    out |= 1 << i
            if self.lang is Lang.L:
                out &= self._aware_mask(f.agent, f.child)
            return out
        if isinstance(f, Aware):
            if self.lang is not Lang.LKA:
                raise ValueError("Aware is not a grammar node of L; expand it first")
            return self._aware_mask(f.agent, f.child)
        if isinstance(f, ExplicitKnow):
            return self.true_mask(expand_defined(f, Lang.LKA))
        raise TypeError(f"not a formula: {f!r}")

    def check(self, g: Formula):
        bad = self.full & ~self.true_mask(g)
        if not bad:
            return True, []
        return False, [self.worlds[i] for i in range(bad.bit_length()) if (bad >> i) & 1]


class ValidityChecker:
    """Guarded validity over a fixed corpus, with evaluators and verdicts
    shared across queries so large instantiation sweeps stay cheap."""

    def __init__(self, models, semantics: str):
        if semantics not in SEMANTICS:
            raise ValueError(f"unknown semantics {semantics!r}")
        self.models = list(models)
        self.semantics = semantics
        self.lang = Lang.L if semantics in ("HMS", "KLM_L", "FH_L") else Lang.LKA
        self._evaluators = []
        self._states = []
        for m in self.models:
            if semantics == "HMS":
                self._evaluators.append(DenotationEvaluator(m))
                self._states.append(
                    [(s, defined_atoms(m, {s})) for s in sorted(m.frame.state_space)]
                )
            elif semantics in ("KLM_L", "KLM_LKA"):
                self._evaluators.append(_KlmSetEvaluator(m, self.lang))
            else:
                self._evaluators.append(_FhSetEvaluator(m, self.lang))
        self._verdicts = {}
        self._expanded = {}

    def check(self, f: Formula):
        got = self._verdicts.get(f)
        if got is None:
            got = self._check(f)
            self._verdicts[f] = got
        return got

    def valid(self, f: Formula) -> bool:
        return self.check(f)[0]

    def _expand(self, f):
        got = self._expanded.get(f)
        if got is None:
            got = expand_defined(f, self.lang)
            self._expanded[f] = got
        return got

    def _check(self, f):
        g = self._expand(f)
        witnesses = []
        if self.semantics == "HMS":
            at = atoms_of(g)
            for idx, ev in enumerate(self._evaluators):
                for state, defined in self._states[idx]:
                    if at <= defined and ev.value(g, state) is not Truth.TRUE:
                        witnesses.append((idx, str(state)))
        else:
            for idx, ev in enumerate(self._evaluators):
                ok, states = ev.check(g)
                if not ok:
                    witnesses.extend((idx, str(s)) for s in states)
        return not witnesses, witnesses


def valid_over(models, f: Formula, semantics: str):
    """Guarded validity: truth at every state where all the formula's atoms
    are defined. The two-valued awareness-structure semantics has no
    undefined states, so there it is plain validity."""
    return ValidityChecker(models, semantics).check(f)


# ---------------------------------------------------------------------------
# axiom suites


@dataclass(frozen=True)
class Schema:
    id: str
    meta_arity: int
    agent_arity: int
    build: object  # (metas tuple, agents tuple) -> Formula


def _pl_schemas():
    return [
        Schema("PL-Top", 0, 0, lambda ms, ags: TOP),
        Schema("PL1", 2, 0, lambda ms, ags: implies(ms[0], implies(ms[1], ms[0]))),
        Schema("PL2", 3, 0, lambda ms, ags: implies(
            implies(ms[0], implies(ms[1], ms[2])),
            implies(implies(ms[0], ms[1]), implies(ms[0], ms[2])))),
        Schema("PL3", 2, 0, lambda ms, ags: implies(
            implies(Not(ms[0]), Not(ms[1])), implies(ms[1], ms[0]))),
    ]


def _hms_schemas():
    A, K = Aware, Know
    return _pl_schemas() + [
        Schema("Symmetry", 1, 1,
               lambda ms, ags: iff(A(ags[0], Not(ms[0])), A(ags[0], ms[0]))),
        Schema("Awareness Conjunction", 2, 1,
               lambda ms, ags: iff(
                   A(ags[0], _and(ms[0], ms[1])),
                   _and(A(ags[0], ms[0]), A(ags[0], ms[1])))),
        Schema("Awareness Knowledge Reflection", 1, 2,
               lambda ms, ags: iff(A(ags[0], ms[0]), A(ags[0], K(ags[1], ms[0])))),
        Schema("T", 1, 1, lambda ms, ags: implies(K(ags[0], ms[0]), ms[0])),
        Schema("4", 1, 1,
               lambda ms, ags: implies(K(ags[0], ms[0]), K(ags[0], K(ags[0], ms[0])))),
    ]


def _lga_schemas():
    A, K, X = Aware, Know, ExplicitKnow
    return _pl_schemas() + [
        Schema("K-Distribution", 2, 1, lambda ms, ags: implies(
            _and(K(ags[0], ms[0]), implies(K(ags[0], ms[0]), K(ags[0], ms[1]))),
            K(ags[0], ms[1]))),
        Schema("Explicit Knowledge", 1, 1, lambda ms, ags: iff(
            X(ags[0], ms[0]), _and(K(ags[0], ms[0]), A(ags[0], ms[0])))),
        Schema("A1", 2, 1, lambda ms, ags: iff(
            A(ags[0], _and(ms[0], ms[1])), _and(A(ags[0], ms[0]), A(ags[0], ms[1])))),
        Schema("A2", 1, 1, lambda ms, ags: iff(A(ags[0], Not(ms[0])), A(ags[0], ms[0]))),
        Schema("A3", 1, 2, lambda ms, ags: iff(
            A(ags[0], X(ags[1], ms[0])), A(ags[0], ms[0]))),
        Schema("A4", 1, 2, lambda ms, ags: iff(
            A(ags[0], A(ags[1], ms[0])), A(ags[0], ms[0]))),
        Schema("A5", 1, 2, lambda ms, ags: iff(
            A(ags[0], K(ags[1], ms[0])), A(ags[0], ms[0]))),
        Schema("A11", 1, 1, lambda ms, ags: implies(
            A(ags[0], ms[0]), K(ags[0], A(ags[0], ms[0])))),
        Schema("A12", 1, 1, lambda ms, ags: implies(
            Not(A(ags[0], ms[0])), K(ags[0], Not(A(ags[0], ms[0]))))),
    ]


def _and(f, g):
    from .formula import And
    return And(f, g)


SCHEMA_5 = Schema("5", 1, 1, lambda ms, ags: implies(
    Not(Know(ags[0], ms[0])), Know(ags[0], Not(Know(ags[0], ms[0])))))


@dataclass(frozen=True)
class AxiomSuite:
    name: str
    schemas: tuple
    rules: tuple


def hms_suite() -> AxiomSuite:
    return AxiomSuite("HMS", tuple(_hms_schemas()), ("MP", "RK-Inference"))


def lga_suite() -> AxiomSuite:
    return AxiomSuite("LGA", tuple(_lga_schemas()), ("MP", "K-Inference"))


def _suite_semantics(suite, model):
    if isinstance(model, KripkeLatticeModel):
        return "KLM_L" if suite.name == "HMS" else "KLM_LKA"
    if isinstance(model, HMSModel):
        if suite.name != "HMS":
            raise ValueError("the LGA suite does not apply to space-lattice models")
        return "HMS"
    if isinstance(model, FHModel):
        if suite.name != "LGA":
            raise ValueError("the HMS suite does not apply to awareness structures")
        return "FH_LKA"
    raise TypeError(f"unsupported model class {type(model).__name__}")


def _model_signature(models):
    atoms, agents = set(), set()
    for m in models:
        if isinstance(m, KripkeLatticeModel):
            atoms |= m.base.atoms
            agents |= m.base.agents
        elif isinstance(m, HMSModel):
            atoms |= m.atoms
            agents |= m.frame.agents
        else:
            atoms |= m.base.atoms
            agents |= m.base.agents
    return frozenset(atoms), frozenset(agents)


def check_axiom_suite(models, suite: AxiomSuite, inst_depth: int,
                      extra_schemas=(), check_rules=True):
    """Instantiate every schema with all metavariable fillings up to the given
    depth and all agent tuples, apply guarded validity over the model corpus,
    and report per schema. Rules are reported as validity preservation over
    the same corpus (a necessary condition only)."""
    if not models:
        raise ValueError("empty model corpus")
    semantics = _suite_semantics(suite, models[0])
    for m in models[1:]:
        if _suite_semantics(suite, m) != semantics:
            raise ValueError("mixed model classes in one corpus")
    if suite.name == "HMS" and semantics == "KLM_L":
        for m in models:
            _require_partitional(m)
    atoms, agents = _model_signature(models)
    lang = Lang.L if suite.name == "HMS" else Lang.LKA
    metas = enumerate_formulas(atoms, agents, inst_depth, lang)
    agent_list = sorted(agents)
    report = {"kind": "axioms", "suite": suite.name, "depth": inst_depth,
              "checked": 0, "schemas": {}, "rules": {}, "failures": [],
              "rule_note": "rules checked as validity preservation over this corpus only"}

    def agent_tuples(n):
        if n == 0:
            return [()]
        if n == 1:
            return [(a,) for a in agent_list]
        return [(a, b) for a in agent_list for b in agent_list]

    def meta_tuples(n):
        out = [()]
        for _ in range(n):
            out = [t + (f,) for t in out for f in metas]
        return out

    checker = ValidityChecker(models, semantics)
    fast = all(isinstance(ev, _KlmSetEvaluator) for ev in checker._evaluators)
    if fast:
        meta_masks = [
            {f: (ev.true_mask(f), atoms_of(f)) for f in metas}
            for ev in checker._evaluators
        ]
    for schema in list(suite.schemas) + list(extra_schemas):
        entry = {"checked": 0, "failures": []}
        slots = tuple(_Slot() for _ in range(schema.meta_arity))
        for ags in agent_tuples(schema.agent_arity):
            skeleton = schema.build(slots, ags) if fast else None
            for ms in meta_tuples(schema.meta_arity):
                if fast:
                    ok = True
                    for ev, masks in zip(checker._evaluators, meta_masks):
                        for slot, f in zip(slots, ms):
                            slot.mask, slot.atoms = masks[f]
                        if not ev.check_skeleton(skeleton):
                            ok = False
                            break
                    if not ok:
                        ok, witnesses = checker.check(schema.build(ms, ags))
                else:
                    ok, witnesses = checker.check(schema.build(ms, ags))
                entry["checked"] += 1
                report["checked"] += 1
                if not ok:
                    idx, state = witnesses[0]
                    failure = {"formula": to_text(schema.build(ms, ags)),
                               "state": str(state),
                               "left": "Undefined" if semantics == "HMS" else "not True",
                               "right": "True"}
                    entry["failures"].append(failure)
                    report["failures"].append({"schema": schema.id, **failure})
                if report["checked"] > INSTANTIATION_CAP:
                    entry["capped"] = True
                    break
            if entry.get("capped"):
                break
        entry["passed"] = not entry["failures"]
        report["schemas"][schema.id] = entry
    if check_rules:
        _check_rules(checker, suite, metas, agent_list, report)
    report["passed"] = not report["failures"] and all(
        r["preserved"] for r in report["rules"].values()
    )
    return report


def _check_rules(checker, suite, metas, agent_list, report):
    small = [f for f in metas if len(to_text(f)) <= 24][:40]
    valid = checker.valid

    for rule in suite.rules:
        entry = {"premise_valid": 0, "vacuous": 0, "violations": []}
        if rule == "MP":
            for f in small:
                for g in small:
                    if valid(f) and valid(implies(f, g)):
                        entry["premise_valid"] += 1
                        if not valid(g):
                            entry["violations"].append((to_text(f), to_text(g)))
                    else:
                        entry["vacuous"] += 1
        elif rule == "K-Inference":
            for f in small:
                if valid(f):
                    entry["premise_valid"] += 1
                    for a in agent_list:
                        if not valid(Know(a, f)):
                            entry["violations"].append((to_text(f), a))
                else:
                    entry["vacuous"] += 1
        elif rule == "RK-Inference":
            groups = [(f,) for f in small] + \
                     [(f, g) for f in small[:12] for g in small[:12]]
            for fs in groups:
                pooled = frozenset().union(*(atoms_of(f) for f in fs))
                for g in small:
                    if not atoms_of(g) <= pooled:
                        continue
                    if valid(implies(conj(fs), g)):
                        entry["premise_valid"] += 1
                        for a in agent_list:
                            if not valid(implies(conj([Know(a, f) for f in fs]),
                                                 Know(a, g))):
                                entry["violations"].append(
                                    ([to_text(f) for f in fs], to_text(g), a))
                    else:
                        entry["vacuous"] += 1
        entry["preserved"] = not entry["violations"]
        report["rules"][rule] = entry


# ---------------------------------------------------------------------------
# derived theorems


def derived_theorem_checks(models):
    """Three consequences of the explicit-knowledge axioms, checked with all
    depth-1 instantiations over the corpus signature."""
    atoms, agents = _model_signature(models)
    metas = enumerate_formulas(atoms, agents, 1, Lang.L)
    checker = ValidityChecker(models, "KLM_L")
    report = {}

    def check(name, build):
        failures = []
        for a in sorted(agents):
            for f in metas:
                inst = build(a, f)
                ok, witnesses = checker.check(inst)
                if not ok:
                    failures.append({"formula": to_text(inst),
                                     "state": str(witnesses[0][1])})
        report[name] = {"passed": not failures, "failures": failures}

    check("knowledge trichotomy", lambda a, f: implies(
        Know(a, Not(Know(a, Not(Know(a, f))))),
        lor(Know(a, f), Know(a, Not(Know(a, f))))))
    check("awareness introspection", lambda a, f: implies(
        Aware(a, f), Know(a, Aware(a, f))))
    check("awareness generated by atoms", lambda a, f: iff(
        Aware(a, f), conj([Aware(a, Atom(p)) for p in sorted(atoms_of(f))])))
    report["passed"] = all(v["passed"] for k, v in report.items() if k != "passed")
    return report


# ---------------------------------------------------------------------------
# random model generation


def _random_partition(rng, worlds):
    cells = []
    for w in worlds:
        if cells and rng.random() < 0.6:
            rng.choice(cells).append(w)
        else:
            cells.append([w])
    return frozenset((w, v) for c in cells for w in c for v in c)


def random_klm_eq(rng: random.Random, max_worlds=4, max_atoms=3, agents=("a", "b")):
    """A random lattice model whose relations are equivalence relations and
    whose awareness is constant on information cells."""
    n = rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(1, n + 1)]
    k = rng.randint(1, max_atoms)
    atoms = [f"p{i}" for i in range(1, k + 1)]
    relations = {a: _random_partition(rng, worlds) for a in agents}
    valuation = {p: frozenset(w for w in worlds if rng.random() < 0.5) for p in atoms}
    awareness = {}
    for a in agents:
        per = {}
        for w in worlds:
            if w not in per:
                aw = frozenset(p for p in atoms if rng.random() < 0.6)
                cell = {v for (u, v) in relations[a] if u == w}
                for v in cell:
                    per[v] = aw
        awareness[a] = per
    base = KripkeModel.make(atoms, agents, worlds, relations, valuation)
    out = KripkeLatticeModel.make(base, awareness)
    assert not validate_klm(out)
    return out


def random_klm(rng: random.Random, max_worlds=4, max_atoms=3, agents=("a", "b")):
    """A random lattice model with arbitrary relations. Awareness is made
    constant on each relation-connected component, so agents know what they
    are aware of; this is the class the general-awareness axioms describe."""
    n = rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(1, n + 1)]
    k = rng.randint(1, max_atoms)
    atoms = [f"p{i}" for i in range(1, k + 1)]
    relations = {
        a: frozenset(
            (w, v) for w in worlds for v in worlds if rng.random() < 0.4
        )
        for a in agents
    }
    valuation = {p: frozenset(w for w in worlds if rng.random() < 0.5) for p in atoms}
    awareness = {}
    for a in agents:
        per = {w: set(p for p in atoms if rng.random() < 0.6) for w in worlds}
        changed = True
        while changed:
            changed = False
            for (w, v) in relations[a]:
                joint = per[w] | per[v]
                if per[w] != joint or per[v] != joint:
                    per[w] = per[v] = joint
                    changed = True
        awareness[a] = {w: frozenset(s) for w, s in per.items()}
    base = KripkeModel.make(atoms, agents, worlds, relations, valuation)
    out = KripkeLatticeModel.make(base, awareness)
    assert not validate_klm(out)
    return out
