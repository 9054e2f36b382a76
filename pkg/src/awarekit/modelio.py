"""JSON load/store for the four model file kinds, plus bundled fixtures.

Stored files are canonical: keys sorted, set-valued fields sorted, so a
store/load round trip is byte-stable.
"""

from __future__ import annotations

import json
from importlib import resources

from .fh import AtomGenerated, Explicit, FHModel
from .formula import Lang, parse, to_text
from .hms import Event, HMSModel, UnawarenessFrame
from .klm import KripkeLatticeModel
from .kripke import KripkeModel

KINDS = ("kripke", "klm", "hms", "fh")


def load_kripke(body) -> KripkeModel:
    return KripkeModel.make(
        atoms=body["atoms"],
        agents=body["agents"],
        worlds=body["worlds"],
        relations={a: [tuple(p) for p in pairs] for a, pairs in body["relations"].items()},
        valuation=body["valuation"],
    )


def store_kripke(m: KripkeModel) -> dict:
    return {
        "atoms": sorted(m.atoms),
        "agents": sorted(m.agents),
        "worlds": sorted(m.worlds),
        "relations": {a: sorted([w, v] for (w, v) in m.relations.get(a, frozenset()))
                      for a in sorted(m.agents)},
        "valuation": {p: sorted(m.valuation[p]) for p in sorted(m.atoms)},
    }


def load_klm(body) -> KripkeLatticeModel:
    base = load_kripke(body)
    return KripkeLatticeModel.make(base, body["awareness"])


def store_klm(k: KripkeLatticeModel) -> dict:
    out = store_kripke(k.base)
    out["awareness"] = {
        a: {w: sorted(k.awareness[a][w]) for w in sorted(k.base.worlds)}
        for a in sorted(k.base.agents)
    }
    return out


def load_hms(body) -> HMSModel:
    projections = {}
    for key, m in body.get("projections", {}).items():
        upper, _, lower = key.partition("->")
        if not lower:
            raise ValueError(f"bad projection key {key!r}; expected 'upper->lower'")
        projections[(upper.strip(), lower.strip())] = dict(m)
    frame = UnawarenessFrame(
        spaces=body["spaces"],
        order=[tuple(p) for p in body.get("order", [])],
        projections=projections,
        pi=body["pi"],
    )
    valuation = {
        p: Event.make(e["base_space"], e["base_set"])
        for p, e in body["valuation"].items()
    }
    return HMSModel(frame, valuation)


def store_hms(m: HMSModel) -> dict:
    fr = m.frame
    order = sorted(
        [lo, up] for (lo, up) in fr.leq if lo != up
    )
    projections = {}
    for (up, lo), pm in sorted(fr.maps.items()):
        if up != lo:
            projections[f"{up}->{lo}"] = {s: pm[s] for s in sorted(pm)}
    return {
        "spaces": {S: sorted(fr.spaces[S]) for S in sorted(fr.spaces)},
        "order": order,
        "projections": projections,
        "pi": {a: {s: sorted(fr.pi[a][s]) for s in sorted(fr.pi[a])}
               for a in sorted(fr.agents)},
        "valuation": {p: {"base_space": e.base_space, "base_set": sorted(e.base_set)}
                      for p, e in sorted(m.valuation.items())},
    }


def _load_awareness_set(body):
    if body["kind"] == "atom-generated":
        return AtomGenerated.make(body["atoms"])
    if body["kind"] == "explicit":
        return Explicit.make(parse(t, Lang.LKA) for t in body["formulas"])
    raise ValueError(f"unknown awareness set kind {body['kind']!r}")


def load_fh(body) -> FHModel:
    base = load_kripke(body)
    awareness = {
        a: {w: _load_awareness_set(s) for w, s in per.items()}
        for a, per in body["awareness_sets"].items()
    }
    return FHModel.make(base, awareness)


def store_fh(s: FHModel) -> dict:
    out = store_kripke(s.base)
    sets = {}
    for a in sorted(s.base.agents):
        per = {}
        for w in sorted(s.base.worlds):
            aset = s.awareness[a][w]
            if isinstance(aset, AtomGenerated):
                per[w] = {"kind": "atom-generated", "atoms": sorted(aset.atoms)}
            else:
                per[w] = {"kind": "explicit",
                          "formulas": [to_text(f) for f in aset.formulas]}
        sets[a] = per
    out["awareness_sets"] = sets
    return out


_LOADERS = {"kripke": load_kripke, "klm": load_klm, "hms": load_hms, "fh": load_fh}
_STORERS = {
    KripkeModel: ("kripke", store_kripke),
    KripkeLatticeModel: ("klm", store_klm),
    HMSModel: ("hms", store_hms),
    FHModel: ("fh", store_fh),
}


def load_model(path_or_body, kind=None):
    """Load a model from a file path or an already-parsed body dict.

    The kind is read from the body's "kind" field, guessed from the file name
    suffix (e.g. name.klm.json), or passed explicitly.
    """
    if isinstance(path_or_body, dict):
        body = dict(path_or_body)
    else:
        with open(path_or_body, encoding="utf-8") as fh:
            body = json.load(fh)
        if kind is None:
            parts = str(path_or_body).split(".")
            if len(parts) >= 3 and parts[-2] in KINDS:
                kind = parts[-2]
    kind = body.pop("kind", kind)
    body.pop("comment", None)
    if kind not in KINDS:
        raise ValueError(f"cannot determine model kind (got {kind!r})")
    return _LOADERS[kind](body)


def store_model(model, path=None, comment=None) -> dict:
    for cls, (kind, storer) in _STORERS.items():
        if isinstance(model, cls):
            body = {"kind": kind}
            if comment:
                body["comment"] = comment
            body.update(storer(model))
            break
    else:
        raise TypeError(f"cannot store a {type(model).__name__}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(body, fh, indent=2, sort_keys=False)
            fh.write("\n")
    return body


def fixture_path(name: str):
    return resources.files("awarekit") / "fixtures" / name


def load_fixture(name: str):
    with resources.as_file(fixture_path(name)) as p:
        return load_model(p)
