"""Awareness structures: a Kripke model plus per-agent, per-world awareness
sets of formulas, with a classical two-valued semantics.

Awareness sets come in two representations. AtomGenerated holds an atom set
and stands, intensionally, for the infinite set of all formulas over those
atoms; this is the shape propositionally generated awareness takes. Explicit
holds a literal finite formula list and exists for adversarial inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

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
    enumerate_formulas,
    expand_defined,
    in_language,
)
from .kripke import KripkeModel, validate_kripke


@dataclass(frozen=True)
class AtomGenerated:
    atoms: frozenset

    @classmethod
    def make(cls, atoms):
        return cls(frozenset(atoms))

    def contains(self, f: Formula) -> bool:
        return atoms_of(f) <= self.atoms


@dataclass(frozen=True)
class Explicit:
    formulas: tuple

    @classmethod
    def make(cls, formulas):
        return cls(tuple(formulas))

    def contains(self, f: Formula) -> bool:
        return f in self.formulas


@dataclass(frozen=True)
class FHModel:
    """A Kripke model over a sublanguage's atoms plus an awareness function."""

    base: KripkeModel
    awareness: dict  # agent -> world -> AwarenessSet

    @classmethod
    def make(cls, base, awareness):
        return cls(base=base, awareness={a: dict(per) for a, per in awareness.items()})


def validate_fh(s: FHModel):
    problems = list(validate_kripke(s.base))
    for a in s.base.agents:
        per = s.awareness.get(a)
        if per is None:
            problems.append(f"no awareness sets for agent {a!r}")
            continue
        for w in s.base.worlds:
            if w not in per:
                problems.append(f"no awareness set for agent {a!r} at world {w!r}")
        for key in per:
            if key not in s.base.worlds:
                problems.append(f"awareness of agent {a!r} keyed by unknown world {key!r}")
    for a in s.awareness:
        if a not in s.base.agents:
            problems.append(f"awareness sets for unknown agent {a!r}")
    return problems


def aware_of(s: FHModel, agent, world, f: Formula) -> bool:
    if agent not in s.base.agents:
        raise KeyError(f"unknown agent {agent!r}")
    if world not in s.base.worlds:
        raise KeyError(f"unknown world {world!r}")
    return s.awareness[agent][world].contains(f)


PP_SURROGATE_DEPTH = 2


def check_pp(s: FHModel):
    """Whether every awareness set is generated by primitive propositions.

    AtomGenerated sets satisfy this by construction. Explicit sets are checked
    against all formulas of depth <= 2 over the model's atoms, a finite
    surrogate for the biconditional, so their verdict is bounded: a pass means
    no counterexample up to that depth. The report marks this.
    """
    witnesses = []
    bounded = False
    probes = None
    for a in sorted(s.base.agents):
        for w in sorted(s.base.worlds):
            aset = s.awareness[a][w]
            if isinstance(aset, AtomGenerated):
                continue
            bounded = True
            if probes is None:
                probes = enumerate_formulas(
                    s.base.atoms or {"p"}, s.base.agents, PP_SURROGATE_DEPTH, Lang.LKA
                )
            generated = frozenset().union(*(atoms_of(f) for f in aset.formulas)) \
                if aset.formulas else frozenset()
            for f in probes:
                if aset.contains(f) != (atoms_of(f) <= generated):
                    witnesses.append((a, w, f))
                    break
    return {"passed": not witnesses, "witnesses": witnesses,
            "verdict": "bounded" if bounded else "exact"}


def check_ka(s: FHModel):
    """Whether awareness is constant along each agent's relation."""
    witnesses = []
    for a in sorted(s.base.agents):
        per = s.awareness[a]
        for (w, v) in sorted(s.base.relations.get(a, frozenset())):
            left, right = per[w], per[v]
            if isinstance(left, Explicit) and isinstance(right, Explicit):
                same = set(left.formulas) == set(right.formulas)
            else:
                same = left == right
            if not same:
                witnesses.append((a, w, v))
    return not witnesses, witnesses


class FHEvaluator:
    """Memoizing two-valued evaluator for one model."""

    def __init__(self, s: FHModel, lang: Lang):
        self.s = s
        self.lang = lang
        self._cache = {}

    def value(self, f: Formula, w) -> bool:
        key = (f, w)
        got = self._cache.get(key)
        if got is None:
            got = self._value(f, w)
            self._cache[key] = got
        return got

    def _value(self, f, w):
        s = self.s
        if isinstance(f, Top):
            return True
        if isinstance(f, Atom):
            try:
                return w in s.base.valuation[f.name]
            except KeyError:
                raise KeyError(f"atom {f.name!r} is outside the model's language") from None
        if isinstance(f, Not):
            return not self.value(f.child, w)
        if isinstance(f, And):
            return self.value(f.left, w) and self.value(f.right, w)
        if isinstance(f, Know):
            if self.lang is Lang.L:
                # explicit reading: awareness of the content plus truth
                # throughout the cell
                if not aware_of(s, f.agent, w, f.child):
                    return False
            return all(self.value(f.child, v) for v in s.base.successors(f.agent, w))
        if isinstance(f, Aware):
            if self.lang is Lang.L:
                raise ValueError("Aware is not a grammar node of L; expand it first")
            return aware_of(s, f.agent, w, f.child)
        if isinstance(f, ExplicitKnow):
            if self.lang is Lang.L:
                raise ValueError("ExplicitKnow is not a grammar node of L; expand it first")
            return self.value(expand_defined(f, Lang.LKA), w)
        raise TypeError(f"not a formula: {f!r}")


def _check_world(s, w):
    if w not in s.base.worlds:
        raise KeyError(f"unknown world {w!r}")


def eval_L_fh(s: FHModel, w, f: Formula, evaluator=None) -> bool:
    """Two-valued satisfaction with K read as explicit knowledge: awareness of
    the content plus truth at every accessible world. Atoms outside the
    model's language are an error, not a third value."""
    if not in_language(f, Lang.L):
        raise ValueError("formula is not in the explicit-knowledge language; expand it first")
    _check_world(s, w)
    ev = evaluator or FHEvaluator(s, Lang.L)
    return ev.value(f, w)


def eval_LKA_fh(s: FHModel, w, f: Formula, evaluator=None) -> bool:
    """Two-valued satisfaction with K implicit, A by awareness-set membership,
    and X as their conjunction."""
    _check_world(s, w)
    ev = evaluator or FHEvaluator(s, Lang.LKA)
    return ev.value(f, w)
