import pytest

from awarekit.klm import KripkeLatticeModel
from awarekit.kripke import KripkeModel


def part(cells):
    """Relation pairs of the partition with the given cells."""
    out = set()
    for cell in cells:
        for w in cell:
            for v in cell:
                out.add((w, v))
    return sorted(out)


def make_trade():
    base = KripkeModel.make(
        atoms=["i", "l"],
        agents=["b", "o"],
        worlds=["w1", "w2", "w3"],
        relations={
            "b": part([["w1"], ["w2", "w3"]]),
            "o": part([["w1", "w2", "w3"]]),
        },
        valuation={"i": ["w1"], "l": ["w1", "w2"]},
    )
    awareness = {
        "b": {"w1": ["i", "l"], "w2": ["i"], "w3": ["i"]},
        "o": {"w1": ["i", "l"], "w2": ["i", "l"], "w3": ["i", "l"]},
    }
    return KripkeLatticeModel.make(base, awareness)


@pytest.fixture(scope="session")
def trade():
    return make_trade()
