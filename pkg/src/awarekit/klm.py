"""Kripke lattice models: awareness maps over the restriction lattice and the
guarded three-valued semantics.

The canonical representation of an awareness map is a per-agent, per-base-world
atom set Aw_a(w), inducing pi_a(w_X) = w_{X & Aw_a(w)}. No-Surprises forces
this product form (the value at the full vocabulary determines all others), so
the assignment form is complete for NS-satisfying maps; explicit pointwise maps
exist only as checker input.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations

from .formula import (
    And,
    Atom,
    Aware,
    ExplicitKnow,
    Formula,
    Know,
    Lang,
    Not,
    Top,
    atoms_of,
    expand_defined,
    in_language,
)
from .kripke import KripkeModel, WorldId, validate_kripke
from .truth import Truth, truth_of

DEFAULT_LATTICE_CAP = 12


def lattice_cap() -> int:
    return int(os.environ.get("AWAREKIT_LATTICE_CAP", DEFAULT_LATTICE_CAP))


def _check_cap(atoms, override=False):
    if not override and len(atoms) > lattice_cap():
        raise ValueError(
            f"refusing exhaustive scan over {len(atoms)} atoms "
            f"(cap {lattice_cap()}; set AWAREKIT_LATTICE_CAP to override)"
        )


def subsets(atoms):
    """All subsets of an atom set, smallest first, deterministic order."""
    atoms = sorted(atoms)
    return [
        frozenset(c) for r in range(len(atoms) + 1) for c in combinations(atoms, r)
    ]


@dataclass(frozen=True)
class KripkeLatticeModel:
    """A base Kripke model for the full atom set plus an awareness assignment
    agent -> world -> atom subset."""

    base: KripkeModel
    awareness: dict

    @classmethod
    def make(cls, base, awareness):
        return cls(
            base=base,
            awareness={
                a: {w: frozenset(s) for w, s in per_world.items()}
                for a, per_world in awareness.items()
            },
        )

    def awareness_atoms(self, agent, world) -> frozenset:
        if agent not in self.base.agents:
            raise KeyError(f"unknown agent {agent!r}")
        if world not in self.base.worlds:
            raise KeyError(f"unknown world {world!r}")
        return self.awareness[agent][world]

    def omega(self, override_cap=False):
        """All world copies w_X, ordered by world id, then by vocabulary from
        the full set downwards (so full-vocabulary copies come first)."""
        _check_cap(self.base.atoms, override_cap)
        vocabularies = sorted(
            subsets(self.base.atoms), key=lambda X: (-len(X), tuple(sorted(X)))
        )
        return [
            WorldId(w, X) for w in sorted(self.base.worlds) for X in vocabularies
        ]


def awareness_image(k: KripkeLatticeModel, agent, w: WorldId) -> WorldId:
    """pi_a(w_X) = w_{X & Aw_a(w)}: the same world under the agent's vocabulary."""
    if not w.vocabulary <= k.base.atoms:
        raise KeyError(f"vocabulary of {w} is not a subset of the model's atoms")
    aw = k.awareness_atoms(agent, w.base)
    return WorldId(w.base, w.vocabulary & aw)


def validate_klm(k: KripkeLatticeModel):
    """Well-formedness report: base validity, awareness keying, and the
    Introspective-Idempotence requirement (awareness monotone along R_a)."""
    problems = list(validate_kripke(k.base))
    for a in k.base.agents:
        per_world = k.awareness.get(a)
        if per_world is None:
            problems.append(f"no awareness assignment for agent {a!r}")
            continue
        for w in k.base.worlds:
            if w not in per_world:
                problems.append(f"no awareness set for agent {a!r} at world {w!r}")
            elif not per_world[w] <= k.base.atoms:
                problems.append(
                    f"awareness of agent {a!r} at {w!r} mentions unknown atoms "
                    f"{sorted(per_world[w] - k.base.atoms)}"
                )
        for key in per_world or {}:
            if key not in k.base.worlds:
                problems.append(f"awareness of agent {a!r} keyed by unknown world {key!r}")
    if not problems:
        for a in sorted(k.base.agents):
            for (w, v) in sorted(k.base.relations.get(a, frozenset())):
                if not k.awareness[a][w] <= k.awareness[a][v]:
                    problems.append(
                        f"Introspective Idempotence fails: agent {a!r} has "
                        f"({w!r},{v!r}) accessible but Aw({w!r}) is not a subset of Aw({v!r})"
                    )
    return problems


# ---------------------------------------------------------------------------
# pointwise maps and the D / II / NS checker


@dataclass
class PropertyReport:
    """Per-property verdicts with a concrete witness for each failure."""

    passed: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def record(self, name, witness=None):
        if witness is None:
            self.passed.setdefault(name, True)
        else:
            self.passed[name] = False
            self.witnesses.setdefault(name, witness)

    def all_pass(self, *names):
        names = names or tuple(self.passed)
        return all(self.passed.get(n, False) for n in names)


def induced_pointwise(base: KripkeModel, awareness, override_cap=False):
    """The total pointwise map agent -> {w_X: w_Y} induced by an assignment."""
    _check_cap(base.atoms, override_cap)
    out = {}
    for a in base.agents:
        per = {}
        for w in base.worlds:
            aw = awareness[a][w]
            for X in subsets(base.atoms):
                per[WorldId(w, X)] = WorldId(w, X & aw)
        out[a] = per
    return out


def check_awareness_properties(base: KripkeModel, pointwise, override_cap=False):
    """Check Downwards, Introspective Idempotence and No Surprises on a total
    pointwise awareness map over the full restriction lattice."""
    _check_cap(base.atoms, override_cap)
    all_subsets = subsets(base.atoms)
    for a in sorted(base.agents):
        per = pointwise.get(a)
        if per is None:
            raise ValueError(f"pointwise map missing agent {a!r}")
        for w in base.worlds:
            for X in all_subsets:
                if WorldId(w, X) not in per:
                    raise ValueError(
                        f"pointwise map of agent {a!r} is not total: no entry for {WorldId(w, X)}"
                    )

    report = PropertyReport()
    for a in sorted(base.agents):
        per = pointwise[a]
        for w in sorted(base.worlds):
            for X in all_subsets:
                src = WorldId(w, X)
                img = per[src]
                if img.base != w or not img.vocabulary <= X:
                    report.record("D", (a, src, img))
                else:
                    report.record("D")
                # II: every world in the cell of the image maps into the cell
                Y = img.vocabulary
                cell = base.successors(a, w) if img.base == w else frozenset()
                ok = True
                for v in cell:
                    vimg = per[WorldId(v, Y)]
                    if vimg.vocabulary != Y or vimg.base not in cell:
                        ok = False
                        report.record("II", (a, src, WorldId(v, Y), vimg))
                        break
                if ok:
                    report.record("II")
                # NS: the image vocabulary at X determines it at every Y <= X
                Z = img.vocabulary
                ns_ok = True
                for Ysub in subsets(X):
                    expected = WorldId(w, Ysub & Z)
                    if per[WorldId(w, Ysub)] != expected:
                        ns_ok = False
                        report.record("NS", (a, w, X, Ysub, per[WorldId(w, Ysub)], expected))
                        break
                if ns_ok:
                    report.record("NS")
    return report


def canonicalize(base: KripkeModel, pointwise, override_cap=False):
    """Extract the awareness assignment Aw_a(w) = vocabulary of the image of
    w_At from a D- and NS-satisfying pointwise map; fails with a witness if
    the map violates either property."""
    report = check_awareness_properties(base, pointwise, override_cap)
    for prop in ("D", "NS"):
        if not report.passed.get(prop, False):
            raise ValueError(f"property {prop} fails: witness {report.witnesses[prop]}")
    top = frozenset(base.atoms)
    awareness = {
        a: {w: pointwise[a][WorldId(w, top)].vocabulary for w in base.worlds}
        for a in base.agents
    }
    # NS makes the product form reproduce the map everywhere; assert it does
    for a in base.agents:
        for src, img in pointwise[a].items():
            if WorldId(src.base, src.vocabulary & awareness[a][src.base]) != img:
                raise AssertionError(f"NS-canonical form does not reproduce {src} -> {img}")
    return awareness


# ---------------------------------------------------------------------------
# three-valued satisfaction


class Evaluator:
    """Memoizing evaluator for one model; safe to reuse across formulas."""

    def __init__(self, k: KripkeLatticeModel, lang: Lang = Lang.L, strict_two_valued=False):
        self.k = k
        self.lang = lang
        self.strict = strict_two_valued
        self._cache = {}

    def _atoms(self, f):
        return atoms_of(f)

    def value(self, f: Formula, w: WorldId) -> Truth:
        key = (f, w)
        got = self._cache.get(key)
        if got is None:
            got = self._value(f, w)
            self._cache[key] = got
        return got

    def _value(self, f, w):
        k, X = self.k, w.vocabulary
        if isinstance(f, Top):
            return Truth.TRUE
        if isinstance(f, Atom):
            if self.strict:
                return truth_of(w.base in k.base.valuation[f.name])
            if f.name not in X:
                return Truth.UNDEFINED
            return truth_of(w.base in k.base.valuation[f.name])
        if isinstance(f, Not):
            if not self.strict and not self._atoms(f.child) <= X:
                return Truth.UNDEFINED
            return truth_of(self.value(f.child, w) is not Truth.TRUE)
        if isinstance(f, And):
            if not self.strict and not (self._atoms(f.left) | self._atoms(f.right)) <= X:
                return Truth.UNDEFINED
            return truth_of(
                self.value(f.left, w) is Truth.TRUE and self.value(f.right, w) is Truth.TRUE
            )
        if isinstance(f, Know):
            if self.lang is Lang.L:
                return self._know_explicit(f, w)
            return self._know_implicit(f, w)
        if isinstance(f, Aware):
            if self.lang is not Lang.LKA:
                raise ValueError("Aware is not a grammar node of L; expand it first")
            if not self.strict and not self._atoms(f.child) <= X:
                return Truth.UNDEFINED
            img = awareness_image(k, f.agent, w)
            return truth_of(self._atoms(f.child) <= img.vocabulary)
        if isinstance(f, ExplicitKnow):
            if self.lang is not Lang.LKA:
                raise ValueError("ExplicitKnow is not a grammar node of L; expand it first")
            return self.value(expand_defined(f, Lang.LKA), w)
        raise TypeError(f"not a formula: {f!r}")

    def _know_explicit(self, f, w):
        """Explicit-knowledge clause: quantify over the cell of the awareness
        image, at the image's vocabulary level."""
        k, X = self.k, w.vocabulary
        if not self._atoms(f.child) <= X:
            return Truth.UNDEFINED
        img = awareness_image(k, f.agent, w)
        Y = img.vocabulary
        for v in k.base.successors(f.agent, img.base):
            if self.value(f.child, WorldId(v, Y)) is not Truth.TRUE:
                return Truth.FALSE
        return Truth.TRUE

    def _know_implicit(self, f, w):
        """Implicit-knowledge clause: quantify over the cell in the top model,
        the objective perspective."""
        k, X = self.k, w.vocabulary
        if not self.strict and not self._atoms(f.child) <= X:
            return Truth.UNDEFINED
        top = frozenset(k.base.atoms)
        for v in k.base.successors(f.agent, w.base):
            if self.value(f.child, WorldId(v, top)) is not Truth.TRUE:
                return Truth.FALSE
        return Truth.TRUE


def _check_world(k, w):
    if w.base not in k.base.worlds or not w.vocabulary <= k.base.atoms:
        raise KeyError(f"world {w} is not in the model")


def eval_L(k: KripkeLatticeModel, w: WorldId, f: Formula, evaluator=None) -> Truth:
    """Three-valued satisfaction of an explicit-knowledge formula at w_X.

    Undefined exactly when the formula mentions atoms outside X.
    """
    if not in_language(f, Lang.L):
        raise ValueError("formula is not in the explicit-knowledge language; expand it first")
    _check_world(k, w)
    ev = evaluator or Evaluator(k, Lang.L)
    return ev.value(f, w)


def eval_LKA(k: KripkeLatticeModel, w: WorldId, f: Formula, evaluator=None,
             strict_two_valued=False) -> Truth:
    """Three-valued satisfaction with implicit knowledge (evaluated at the top
    model) and primitive awareness.

    With strict_two_valued the definedness guards are dropped and atoms read
    from the top valuation, giving a fully two-valued reading.
    """
    _check_world(k, w)
    ev = evaluator or Evaluator(k, Lang.LKA, strict_two_valued)
    return ev.value(f, w)


def satisfying_states(k: KripkeLatticeModel, f: Formula, lang: Lang = Lang.L,
                      override_cap=False):
    """All w_X where f evaluates True, in deterministic order."""
    ev = Evaluator(k, lang)
    fn = eval_L if lang is Lang.L else eval_LKA
    return [w for w in k.omega(override_cap) if fn(k, w, f, evaluator=ev) is Truth.TRUE]
