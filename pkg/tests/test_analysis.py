import json
from pathlib import Path

import pytest

from mwthard.analysis import analyze_piece, check_terminal_lemma, reduced_cost, relative_costs
from mwthard.arithmetic import IntInterval, ScaledInt, parse_fixed_decimal
from mwthard.pieces import DELTA, SMALL, designer_pieces, designer_w

GOLDENS = json.loads((Path(__file__).parent / "data" / "designer_goldens.json").read_text())


class _Stub:
    """Two small terminals; pattern letters say which areas stay (R = kept)."""

    class _T:
        delta = DELTA[SMALL]

    terminals = [_T(), _T()]

    @staticmethod
    def included(pattern):
        return [pattern[0] == "L", pattern[1] == "R"]


def _iv(text):
    return IntInterval.exact(parse_fixed_decimal(text, 9).value, 9)


def test_reduced_and_relative_arithmetic():
    # published extended-wire rows: internal cost and reduced cost
    c = {"LL": "455.471523435", "LR": "466.990265006", "RL": "444.283180745", "RR": "455.471523435"}
    stub = _Stub()
    red = {k: reduced_cost(stub, k, _iv(v)) for k, v in c.items()}
    assert red["LR"].display(9) == "455.679921006"
    assert red["RL"].display(9) == "455.593524745"
    assert red["LL"] == _iv("455.471523435")
    rel = relative_costs(red)
    assert rel["LR"].display(9) == "0.208397571"
    assert rel["RL"].display(9) == "0.122001310"
    assert rel["LL"] == rel["RR"] == IntInterval.zero(9)


def test_designer_goldens():
    piece = designer_pieces()["wire"]
    table = analyze_piece(piece, scale=GOLDENS["scale"])
    gold = GOLDENS["pieces"]["wire"]["patterns"]
    for row in table.rows:
        assert row.relative.display(9) == gold[row.pattern]["c_tilde"]
        assert row.multiplicity == gold[row.pattern]["multiplicity"]
    assert table.minima()


@pytest.mark.slow
def test_lemma_log_shape():
    rep = check_terminal_lemma(designer_w(), scale=GOLDENS["scale"])
    assert len(rep.cases) == 21
    lines = rep.log_lines()
    assert lines[0] == "Case v1, v1': difference ="
    assert lines[-1].startswith("margin: ") and lines[-1].endswith("holds")
    assert rep.margin == ScaledInt(144, 2)
    assert all(c.gap > ScaledInt(288, 2) for c in rep.cases)
