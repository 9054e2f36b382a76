"""Command-line entry point.

Exit codes: 0 all checks pass, 1 check failures (reports still emitted),
2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .fh import FHModel, check_ka, check_pp, eval_L_fh, eval_LKA_fh, validate_fh
from .formula import (
    ExplicitKnow,
    Lang,
    enumerate_formulas,
    expand_defined,
    parse,
    to_text,
)
from .hms import HMSModel, eval_L_hms, validate_model
from .klm import (
    Evaluator,
    KripkeLatticeModel,
    check_awareness_properties,
    induced_pointwise,
    validate_klm,
)
from .kripke import KripkeModel, parse_world_id, relation_properties, validate_kripke
from .modelio import fixture_path, load_model, store_model
from .transforms import transform
from .truth import Truth
from .verify import (
    SCHEMA_5,
    check_equiv_fh_klm,
    check_L_equiv_hms_klm,
    check_L_equiv_klm_hms,
    check_axiom_suite,
    hms_suite,
    lga_suite,
)

FIXTURES = ("trade.klm.json", "trade.fh.json", "triv1.klm.json")


class UsageError(Exception):
    pass


def _load(path):
    """Load a model file; bare bundled fixture names resolve to the package
    copies when no such file exists locally."""
    if not os.path.exists(path):
        if path in FIXTURES:
            path = str(fixture_path(path))
        else:
            raise UsageError(f"no such model file: {path}")
    try:
        return load_model(path)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load {path}: {exc}") from exc


def _contains_explicit_know(f):
    if isinstance(f, ExplicitKnow):
        return True
    for slot in ("child", "left", "right"):
        child = getattr(f, slot, None)
        if child is not None and _contains_explicit_know(child):
            return True
    return False


def _emit(args, report, human_lines):
    if getattr(args, "json", False):
        print(json.dumps(report, indent=2, default=str))
    else:
        for line in human_lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args):
    model = _load(args.model)
    problems = []
    properties = {}
    if isinstance(model, KripkeLatticeModel):
        kind = "klm"
        problems = list(validate_klm(model))
        report = check_awareness_properties(
            model.base, induced_pointwise(model.base, model.awareness)
        )
        properties = dict(report.passed)
        witnesses = report.witnesses
        properties.update(
            {f"equivalence[{a}]": flags["equivalence"]
             for a, flags in relation_properties(model.base).items()}
        )
    elif isinstance(model, HMSModel):
        kind = "hms"
        report = validate_model(model)
        properties = dict(report.passed)
        witnesses = report.witnesses
    elif isinstance(model, FHModel):
        kind = "fh"
        problems = list(validate_fh(model))
        pp = check_pp(model)
        ka_ok, ka_witnesses = check_ka(model)
        properties = {f"pp ({pp['verdict']})": pp["passed"], "ka": ka_ok}
        witnesses = {}
        if pp["witnesses"]:
            witnesses["pp"] = pp["witnesses"][0]
        if ka_witnesses:
            witnesses["ka"] = ka_witnesses[0]
    elif isinstance(model, KripkeModel):
        kind = "kripke"
        problems = list(validate_kripke(model))
        properties = {
            f"equivalence[{a}]": flags["equivalence"]
            for a, flags in relation_properties(model).items()
        }
        witnesses = {}
    else:
        raise UsageError(f"unsupported model class {type(model).__name__}")
    passed = not problems and all(properties.values())
    report = {"kind": "check", "model": kind, "passed": passed,
              "problems": problems,
              "properties": {k: bool(v) for k, v in properties.items()},
              "witnesses": {k: str(v) for k, v in witnesses.items()}}
    lines = [f"model kind: {kind}"]
    lines += [f"problem: {p}" for p in problems]
    for name in sorted(properties):
        lines.append(f"{name}: {'pass' if properties[name] else 'FAIL'}")
        if not properties[name] and name in witnesses:
            lines.append(f"  witness: {witnesses[name]}")
    lines.append("all checks pass" if passed else "checks FAILED")
    _emit(args, report, lines)
    return 0 if passed else 1


def _cmd_eval(args):
    model = _load(args.model)
    lang = Lang.L if args.lang == "L" else Lang.LKA
    f = parse(args.formula, Lang.LKA)
    if lang is Lang.L:
        if _contains_explicit_know(f):
            raise UsageError("X{a} has no reading in the language L")
        f = expand_defined(f, Lang.L)
    if isinstance(model, KripkeLatticeModel):
        w = parse_world_id(args.at, model.base.atoms)
        if w.base not in model.base.worlds:
            raise UsageError(f"no such world: {w.base}")
        if not w.vocabulary <= model.base.atoms:
            raise UsageError(f"vocabulary of {args.at} is not a subset of the atoms")
        ev = Evaluator(model, lang, strict_two_valued=args.strict_two_valued)
        value = ev.value(f, w)
    elif isinstance(model, HMSModel):
        if lang is not Lang.L:
            raise UsageError("space-lattice models only interpret the language L")
        value = eval_L_hms(model, args.at, f)
    elif isinstance(model, FHModel):
        if args.at not in model.base.worlds:
            raise UsageError(f"no such world: {args.at}")
        got = (eval_L_fh if lang is Lang.L else eval_LKA_fh)(model, args.at, f)
        value = Truth.TRUE if got else Truth.FALSE
    else:
        raise UsageError("plain Kripke models carry no awareness; nothing to evaluate")
    print(value.value)
    return 0


def _cmd_transform(args):
    model = _load(args.input)
    try:
        report = transform(args.kind, model)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    store_model(report.output, args.output)
    props = report.properties
    if isinstance(props, dict):  # FH: {"pp": {...}, "ka": (ok, witnesses)}
        flat = {f"pp ({props['pp']['verdict']})": props["pp"]["passed"],
                "ka": props["ka"][0]}
    else:
        flat = dict(props.passed)
    passed = all(flat.values())
    out = {"kind": "transform", "transform": args.kind, "output": args.output,
           "passed": passed, "properties": {k: bool(v) for k, v in flat.items()}}
    lines = [f"wrote {args.output}"]
    lines += [f"{name}: {'pass' if flat[name] else 'FAIL'}" for name in sorted(flat)]
    _emit(args, out, lines)
    return 0 if passed else 1


def _cmd_equiv(args):
    model = _load(args.model)
    lang = Lang.L if args.lang == "L" else Lang.LKA
    if isinstance(model, HMSModel):
        if lang is not Lang.L:
            raise UsageError("space-lattice models only interpret the language L")
        report = check_L_equiv_hms_klm(model, args.depth)
    elif isinstance(model, FHModel):
        report = check_equiv_fh_klm(model, lang, args.depth)
    elif isinstance(model, KripkeLatticeModel):
        if lang is Lang.L:
            report = check_L_equiv_klm_hms(model, args.depth)
        else:
            report = check_equiv_fh_klm(model, lang, args.depth)
    else:
        raise UsageError("plain Kripke models have no transform counterpart")
    body = report.to_json()
    lines = [f"checked: {report.checked}",
             f"disagreements: {len(report.failures)}"]
    if report.failures:
        first = report.first_disagreement
        lines.append(f"first: {first['formula']} at {first['state']}: "
                     f"{first['left']} vs {first['right']}")
    _emit(args, body, lines)
    return 0 if not report.failures else 1


def _cmd_axioms(args):
    models = [_load(p) for p in args.models]
    suite = hms_suite() if args.suite == "hms" else lga_suite()
    extra = (SCHEMA_5,) if args.include_5 else ()
    try:
        report = check_axiom_suite(models, suite, args.depth,
                                   extra_schemas=extra,
                                   check_rules=not args.no_rules)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    lines = [f"suite: {suite.name}, instantiation depth {args.depth}, "
             f"{report['checked']} instances"]
    for sid, entry in report["schemas"].items():
        lines.append(f"schema {sid}: "
                     f"{'pass' if entry['passed'] else 'FAIL'} "
                     f"({entry['checked']} instances)")
        if entry["failures"]:
            first = entry["failures"][0]
            lines.append(f"  witness: {first['formula']} at {first['state']}")
    for rule, entry in report["rules"].items():
        lines.append(f"rule {rule}: "
                     f"{'preserved' if entry['preserved'] else 'VIOLATED'} "
                     f"({entry['premise_valid']} premise-valid instances)")
    lines.append(report["rule_note"])
    lines.append("suite passes" if report["passed"] else "suite FAILED")
    _emit(args, report, lines)
    return 0 if report["passed"] else 1


def _cmd_enumerate(args):
    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    agents = [a.strip() for a in args.agents.split(",") if a.strip()]
    lang = Lang.L if args.lang == "L" else Lang.LKA
    try:
        formulas = enumerate_formulas(atoms, agents, args.depth, lang)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for f in formulas:
        print(to_text(f))
    return 0


def _cmd_fixtures(args):
    for name in FIXTURES:
        print(name)
    return 0


# ---------------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="awarekit",
        description="Verification workbench for epistemic logics with awareness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a model file and report its properties")
    p.add_argument("model")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("eval", help="evaluate a formula at a state")
    p.add_argument("formula")
    p.add_argument("--model", required=True)
    p.add_argument("--at", required=True,
                   help="state: 'w@{a,b}' for a world copy, bare 'w' means the "
                        "full vocabulary; for space-lattice models a state name")
    p.add_argument("--lang", choices=("L", "LKA"), default="L")
    p.add_argument("--strict-two-valued", action="store_true",
                   help="drop the definedness guards (Kripke lattice models only)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("transform", help="apply a model transform")
    p.add_argument("--kind", choices=("L", "H", "K", "FH"), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("equiv",
                       help="check satisfaction agreement with the model's "
                            "transform counterpart")
    p.add_argument("model")
    p.add_argument("--lang", choices=("L", "LKA"), default="L")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("axioms", help="instantiate an axiom suite over models")
    p.add_argument("--suite", choices=("hms", "lga"), required=True)
    p.add_argument("--models", nargs="+", required=True)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--include-5", action="store_true",
                   help="also instantiate the negative-introspection schema 5")
    p.add_argument("--no-rules", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_axioms)

    p = sub.add_parser("enumerate", help="list all formulas up to a depth")
    p.add_argument("--atoms", required=True, help="comma separated")
    p.add_argument("--agents", required=True, help="comma separated")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--lang", choices=("L", "LKA"), default="L")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("fixtures", help="list bundled fixture files")
    p.set_defaults(func=_cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"awarekit: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"awarekit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
