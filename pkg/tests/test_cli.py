import json
import random

import pytest

from mwthard.cli import run
from mwthard.embedding import layout
from mwthard.pieces import DATA_DIR
from mwthard.sat import Formula1in3, format_instance, random_planar_instance

PIECES = str(DATA_DIR / "designer_pieces.txt")
W = str(DATA_DIR / "designer_W.txt")


@pytest.fixture
def files(tmp_path):
    sq = tmp_path / "square.txt"
    sq.write_text("0 0\n1 0\n1 1\n0 1\n")
    arrow = tmp_path / "arrow.txt"          # vertex (5,1) blocks the bottom edge
    arrow.write_text("0 0\n10 0\n10 10\n5 1\n0 10\n")
    f = Formula1in3(("a", "b", "c"), [("a", "b", "c")])
    one = tmp_path / "one.1in3"
    one.write_text(format_instance(f, layout(list(f.variables), f.clauses)))
    cnf = tmp_path / "small.cnf"
    cnf.write_text(format_instance(random_planar_instance(random.Random(3), 4, 3)))
    return {"square": str(sq), "arrow": str(arrow), "one": str(one), "cnf": str(cnf), "dir": tmp_path}


def test_polygon_mwt(files, capsys):
    assert run(["polygon-mwt", "--poly", files["square"]]) == 0
    out = capsys.readouterr().out
    assert "cost 1.414213562" in out and "multiplicity 2" in out


def test_beta_check_exit_codes(files):
    assert run(["beta-check", "--poly", files["square"]]) == 0
    assert run(["beta-check", "--poly", files["arrow"], "--global"]) == 1
    assert run(["beta-check", "--piece", PIECES, "--global"]) == 0


def test_usage_errors(files):
    assert run(["beta-check"]) == 2
    assert run(["polygon-mwt", "--poly", str(files["dir"] / "missing.txt")]) == 2
    assert run(["--precision", "3", "polygon-mwt", "--poly", files["square"]]) == 2
    assert run(["sat-reduce", "--instance", files["one"]]) == 2


def test_diamond(files):
    kite = files["dir"] / "kite.txt"
    kite.write_text("0 0\n5 -1\n10 0\n5 1\n")
    assert run(["diamond", "--points", str(kite), "--edge", "0", "2"]) == 1
    assert run(["diamond", "--points", files["square"], "--edge", "0", "1"]) == 0


def test_pieces_commands(files, capsys):
    assert run(["verify-piece", "--piece", PIECES, "--w", W]) == 0
    assert run(["analyze-piece", "--piece", PIECES, "--name", "wire", "--format", "tsv"]) == 0
    assert "wire\tLL" in capsys.readouterr().out
    assert run(["check-w", "--data", W]) == 0


def test_sat_reduce(files):
    assert run(["--out", str(files["dir"] / "r"), "sat-reduce", "--instance", files["cnf"], "--check"]) == 0
    assert (files["dir"] / "r" / "small.1in3").exists()


def test_layout_writes_outputs(files):
    out = files["dir"] / "lay"
    assert run(["--out", str(out), "layout", "--instance", files["one"]]) == 0
    side = json.loads((out / "reduction.json").read_text())
    assert side["audit"]["ok"] and side["state_enumeration"]["satisfiable"]
    for name in ("points.txt", "attribution.tsv", "assignments.tsv", "layout.svg", "layout.png"):
        assert (out / name).stat().st_size > 0
    first = (out / "layout.svg").read_bytes()
    assert run(["--out", str(out), "layout", "--instance", files["one"]]) == 0
    assert (out / "layout.svg").read_bytes() == first
    assert run(["audit", "--instance", files["one"], "--mode", "proof"]) == 0


def test_points_file_reloads(files):
    from mwthard.pieces import load_pieces

    out = files["dir"] / "lay2"
    run(["--out", str(out), "layout", "--instance", files["one"]])
    cat = load_pieces((out / "points.txt").read_text())
    assert len(cat) > 0
