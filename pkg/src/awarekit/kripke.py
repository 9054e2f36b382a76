"""Plain Kripke models, information cells, and restrictions to atom subsets.

A restriction is a lazy view: the restricted worlds w_X are (world, X) pairs,
the relation mirrors the source relation exactly, and the valuation covers
exactly the atoms of X. Restrictions to different atom sets are disjoint by
construction, and every restriction has the same number of worlds as the
source model.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class WorldId:
    """A world copy w_X: a base world id paired with a vocabulary X."""

    base: str
    vocabulary: frozenset

    def __str__(self):
        return f"{self.base}@{{{','.join(sorted(self.vocabulary))}}}"

    def sort_key(self):
        return (self.base, tuple(sorted(self.vocabulary)))


def parse_world_id(text: str, full_vocabulary) -> WorldId:
    """Parse 'w@{a,b}' syntax; a bare world id means the full vocabulary."""
    if "@" not in text:
        return WorldId(text, frozenset(full_vocabulary))
    base, _, voc = text.partition("@")
    voc = voc.strip()
    if not (voc.startswith("{") and voc.endswith("}")):
        raise ValueError(f"bad world id syntax: {text!r}")
    inner = voc[1:-1].strip()
    atoms = frozenset(a.strip() for a in inner.split(",") if a.strip()) if inner else frozenset()
    return WorldId(base, atoms)


@dataclass(frozen=True)
class KripkeModel:
    """Finite Kripke model: worlds, per-agent relations, valuation over `atoms`."""

    atoms: frozenset
    agents: frozenset
    worlds: frozenset
    relations: dict  # agent -> frozenset of (w, v) pairs
    valuation: dict  # atom -> frozenset of worlds

    @classmethod
    def make(cls, atoms, agents, worlds, relations, valuation):
        return cls(
            atoms=frozenset(atoms),
            agents=frozenset(agents),
            worlds=frozenset(worlds),
            relations={a: frozenset(tuple(p) for p in pairs) for a, pairs in relations.items()},
            valuation={p: frozenset(ws) for p, ws in valuation.items()},
        )

    def successors(self, agent, world):
        if agent not in self.agents:
            raise KeyError(f"unknown agent {agent!r}")
        if world not in self.worlds:
            raise KeyError(f"unknown world {world!r}")
        rel = self.relations.get(agent, frozenset())
        return frozenset(v for (w, v) in rel if w == world)


@dataclass(frozen=True)
class RestrictedModel:
    """Lazy view of a KripkeModel restricted to vocabulary X."""

    source: KripkeModel
    vocabulary: frozenset

    def worlds(self):
        return frozenset(WorldId(w, self.vocabulary) for w in self.source.worlds)

    def holds(self, atom, world: WorldId) -> bool:
        if atom not in self.vocabulary:
            raise KeyError(f"atom {atom!r} not in vocabulary")
        return world.base in self.source.valuation[atom]

    def successors(self, agent, world: WorldId):
        if world.vocabulary != self.vocabulary:
            raise KeyError(f"world {world} is not at vocabulary {sorted(self.vocabulary)}")
        return frozenset(
            WorldId(v, self.vocabulary) for v in self.source.successors(agent, world.base)
        )


def validate_kripke(m: KripkeModel):
    """Report-style validation; the returned list is empty iff m is well formed."""
    problems = []
    if not m.worlds:
        problems.append("worlds is empty")
    for a, pairs in m.relations.items():
        if a not in m.agents:
            problems.append(f"relation for unknown agent {a!r}")
        for (w, v) in pairs:
            for x in (w, v):
                if x not in m.worlds:
                    problems.append(f"relation pair ({w!r},{v!r}) of agent {a!r} mentions unknown world {x!r}")
    for p, ws in m.valuation.items():
        if p not in m.atoms:
            problems.append(f"valuation for atom {p!r} outside the model's atom set")
        for w in ws:
            if w not in m.worlds:
                problems.append(f"valuation of {p!r} contains unknown world {w!r}")
    for p in m.atoms:
        if p not in m.valuation:
            problems.append(f"no valuation for atom {p!r}")
    return problems


def restrict(m: KripkeModel, X) -> RestrictedModel:
    X = frozenset(X)
    extra = X - m.atoms
    if extra:
        raise ValueError(f"restriction atoms {sorted(extra)} not in the model")
    return RestrictedModel(m, X)


def information_cell(m, agent, world):
    """I_a(w): the successor set of w under agent a's relation.

    Accepts a KripkeModel with a plain world id, or a RestrictedModel with a
    WorldId at its vocabulary.
    """
    if isinstance(m, RestrictedModel):
        return m.successors(agent, world)
    if isinstance(world, WorldId):
        return restrict(m, world.vocabulary).successors(agent, world)
    return m.successors(agent, world)


def relation_properties(m: KripkeModel):
    """Exhaustive per-agent reflexive/transitive/symmetric/equivalence flags."""
    out = {}
    worlds = m.worlds
    for a in sorted(m.agents):
        rel = m.relations.get(a, frozenset())
        reflexive = all((w, w) in rel for w in worlds)
        symmetric = all((v, w) in rel for (w, v) in rel)
        transitive = all(
            (w, u) in rel for (w, v) in rel for (v2, u) in rel if v2 == v
        )
        out[a] = {
            "reflexive": reflexive,
            "symmetric": symmetric,
            "transitive": transitive,
            "equivalence": reflexive and symmetric and transitive,
        }
    return out
