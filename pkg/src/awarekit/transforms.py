"""The four constructive transformations between the model classes, plus the
state correspondence that aligns states of a space-lattice model with world
copies of its lattice-of-restrictions counterpart.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .fh import AtomGenerated, Explicit, FHModel, check_ka
from .formula import atoms_of
from .hms import Event, HMSModel, UnawarenessFrame, defined_atoms, validate_model
from .klm import KripkeLatticeModel, _check_cap, awareness_image, subsets, validate_klm
from .kripke import KripkeModel, WorldId, relation_properties

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateCorrespondence:
    """For each state s, the world copies w_X with w any top-space state
    projecting to s and X the atoms defined throughout s's space."""

    mapping: dict  # state -> frozenset of WorldId

    def __getitem__(self, state):
        return self.mapping[state]


@dataclass(frozen=True)
class TransformReport:
    output: object
    properties: object
    correspondence: StateCorrespondence | None = None


# ---------------------------------------------------------------------------
# L-transform: space lattice to restriction lattice


def _space_atoms(m: HMSModel):
    return {S: defined_atoms(m, m.frame.spaces[S]) for S in m.frame.spaces}


def _min_space_for(m, at_of, X):
    """min{S : At(S) = X}, or None if no space realizes X; an ambiguity (two
    incomparable minimal candidates) is refused."""
    candidates = [S for S, ats in at_of.items() if ats == X]
    if not candidates:
        return None
    minimal = [
        S for S in candidates
        if not any(T != S and m.frame.below(T, S) for T in candidates)
    ]
    if len(minimal) > 1:
        raise ValueError(
            f"ambiguous minimal space for atom set {sorted(X)}: "
            f"candidates {sorted(minimal)}"
        )
    return minimal[0]


def _cell_space(m, cell):
    spaces = {m.frame.state_space[t] for t in cell}
    if len(spaces) != 1:
        raise ValueError(f"possibility set straddles spaces {sorted(spaces)}")
    S = spaces.pop()
    others = [
        S2 for S2 in m.frame.spaces
        if S2 != S and cell <= m.frame.spaces[S2]
    ]
    if others:
        log.debug("possibility set also contained in spaces %s", sorted(others))
    return S


def l_transform(m: HMSModel):
    """Build the lattice-of-restrictions model over the top space.

    The awareness map is computed pointwise at every vocabulary realized by
    some space and extended to unrealized vocabularies by the No-Surprises
    product form from the full-vocabulary value; the two agree wherever both
    are defined, which is asserted.
    """
    fr = m.frame
    T = fr.top_space()
    if T is None:
        raise ValueError("frame has no unique top space")
    at_of = _space_atoms(m)
    atoms = frozenset(m.atoms)
    if _min_space_for(m, at_of, atoms) is None:
        raise ValueError("no space realizes the full atom set")

    worlds = frozenset(fr.spaces[T])
    relations = {}
    for a in sorted(fr.agents):
        pairs = set()
        for w in worlds:
            cell = fr.pi[a][w]
            S = _cell_space(m, cell)
            for v in worlds:
                if fr.maps[(T, S)][v] in cell:
                    pairs.add((w, v))
        relations[a] = frozenset(pairs)

    valuation = {}
    ups = {p: fr.up(e) for p, e in m.valuation.items()}
    for p in atoms:
        valuation[p] = frozenset(w for w in worlds if w in ups[p])

    base = KripkeModel.make(atoms, fr.agents, worlds, relations, valuation)

    # pointwise awareness at realized vocabularies
    realized = {}
    for X in {ats for ats in at_of.values()}:
        S_X = _min_space_for(m, at_of, X)
        if S_X is not None:
            realized[X] = S_X
    awareness = {}
    pointwise = {a: {} for a in fr.agents}
    for a in sorted(fr.agents):
        for w in sorted(worlds):
            for X, S_X in realized.items():
                down = fr.maps[(T, S_X)][w]
                cell = fr.pi[a][down]
                S_Y = _cell_space(m, cell)
                pointwise[a][WorldId(w, X)] = WorldId(w, at_of[S_Y])
        awareness[a] = {
            w: pointwise[a][WorldId(w, atoms)].vocabulary for w in worlds
        }
        # the product form must agree with the pointwise map where both exist
        for src, img in pointwise[a].items():
            product = WorldId(src.base, src.vocabulary & awareness[a][src.base])
            if product != img:
                raise ValueError(
                    f"awareness map is not No-Surprises extendable: "
                    f"{src} maps to {img}, product form gives {product}"
                )

    klm = KripkeLatticeModel.make(base, awareness)
    problems = validate_klm(klm)
    if problems:
        raise ValueError(f"transform output is not well formed: {problems[0]}")

    mapping = {}
    for s, S in fr.state_space.items():
        X = at_of[S]
        preimage = frozenset(w for w in worlds if fr.maps[(T, S)][w] == s)
        mapping[s] = frozenset(WorldId(w, X) for w in preimage)
    return klm, StateCorrespondence(mapping)


# ---------------------------------------------------------------------------
# H-transform: restriction lattice to space lattice


def space_id(X) -> str:
    return "W@{" + ",".join(sorted(X)) + "}"


def h_transform(k: KripkeLatticeModel) -> HMSModel:
    """One space per restriction, ordered by vocabulary inclusion, with
    projections dropping atoms and possibility sets the information cells of
    the awareness images."""
    problems = validate_klm(k)
    if problems:
        raise ValueError(f"input is not well formed: {problems[0]}")
    props = relation_properties(k.base)
    for a, flags in props.items():
        if not flags["equivalence"]:
            raise ValueError(f"relation of agent {a!r} is not an equivalence relation")
    _check_cap(k.base.atoms)

    atoms = k.base.atoms
    vocabularies = subsets(atoms)
    spaces = {
        space_id(X): [str(WorldId(w, X)) for w in sorted(k.base.worlds)]
        for X in vocabularies
    }
    order = [
        (space_id(X), space_id(Y))
        for X in vocabularies for Y in vocabularies if X < Y
    ]
    projections = {}
    for X in vocabularies:
        for Y in vocabularies:
            if X < Y:
                projections[(space_id(Y), space_id(X))] = {
                    str(WorldId(w, Y)): str(WorldId(w, X)) for w in k.base.worlds
                }
    pi = {}
    for a in sorted(k.base.agents):
        per = {}
        for w in k.base.worlds:
            for X in vocabularies:
                img = awareness_image(k, a, WorldId(w, X))
                cell = k.base.successors(a, w)
                per[str(WorldId(w, X))] = {str(WorldId(v, img.vocabulary)) for v in cell}
        pi[a] = per
    frame = UnawarenessFrame(spaces, order, projections, pi)
    valuation = {
        p: Event.make(
            space_id(frozenset((p,))),
            {str(WorldId(w, frozenset((p,)))) for w in k.base.valuation[p]},
        )
        for p in atoms
    }
    out = HMSModel(frame, valuation)
    report = validate_model(out)
    if not report.all_pass():
        failed = [n for n, ok in report.passed.items() if not ok]
        raise ValueError(f"transform output fails frame checks: {failed}")
    return out


# ---------------------------------------------------------------------------
# K-transform and FH-transform: between awareness structures and the lattice


def awareness_atoms_of_set(aset) -> frozenset:
    if isinstance(aset, AtomGenerated):
        return aset.atoms
    if isinstance(aset, Explicit):
        out = frozenset()
        for f in aset.formulas:
            out |= atoms_of(f)
        return out
    raise TypeError(f"not an awareness set: {aset!r}")


def k_transform(s: FHModel) -> KripkeLatticeModel:
    """Read off an awareness assignment from the atoms mentioned across each
    awareness set; requires awareness constant along the relations."""
    ok, witnesses = check_ka(s)
    if not ok:
        raise ValueError(f"awareness is not constant along the relations: witness {witnesses[0]}")
    awareness = {
        a: {w: awareness_atoms_of_set(s.awareness[a][w]) & s.base.atoms
            for w in s.base.worlds}
        for a in s.base.agents
    }
    out = KripkeLatticeModel.make(s.base, awareness)
    problems = validate_klm(out)
    if problems:
        raise ValueError(f"transform output is not well formed: {problems[0]}")
    return out


def fh_transform(k: KripkeLatticeModel) -> FHModel:
    """Emit atom-generated awareness sets from the top-level awareness atoms."""
    problems = validate_klm(k)
    if problems:
        raise ValueError(f"input is not well formed: {problems[0]}")
    awareness = {
        a: {w: AtomGenerated.make(k.awareness_atoms(a, w) & k.base.atoms)
            for w in k.base.worlds}
        for a in k.base.agents
    }
    return FHModel.make(k.base, awareness)


def transform(kind: str, model) -> TransformReport:
    """Dispatch on the transform kind and bundle the output with the property
    report of its class."""
    from .fh import check_pp
    from .hms import validate_model as hms_validate
    from .klm import check_awareness_properties, induced_pointwise

    if kind == "L":
        out, corr = l_transform(model)
        report = check_awareness_properties(
            out.base, induced_pointwise(out.base, out.awareness)
        )
        return TransformReport(out, report, corr)
    if kind == "H":
        out = h_transform(model)
        return TransformReport(out, hms_validate(out))
    if kind == "K":
        out = k_transform(model)
        report = check_awareness_properties(
            out.base, induced_pointwise(out.base, out.awareness)
        )
        return TransformReport(out, report)
    if kind == "FH":
        out = fh_transform(model)
        return TransformReport(out, {"pp": check_pp(out), "ka": check_ka(out)})
    raise ValueError(f"unknown transform kind {kind!r}")
