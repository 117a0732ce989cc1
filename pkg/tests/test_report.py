from mwthard.analysis import analyze_piece
from mwthard.geometry import parse_polygon
from mwthard.pieces import designer_pieces
from mwthard.polygon_mwt import polygon_mwt
from mwthard.report import emit_table, piece_figure, render_png, to_svg, triangulation_figure

SQUARE = parse_polygon("0 0\n1 0\n1 1\n0 1\n")


def test_square_figure():
    res = polygon_mwt(SQUARE)
    doc = triangulation_figure(SQUARE, res.witness.internal_edges)
    c = doc.counts()
    assert c["pt"] == 4 and c["seg"] == 5
    svg = to_svg(doc)
    assert svg.count("<line") == 5 and svg.count("<circle") == 4
    assert svg == to_svg(triangulation_figure(SQUARE, res.witness.internal_edges))


def test_png_deterministic(tmp_path):
    doc = piece_figure(designer_pieces()["wire"])
    render_png(doc, tmp_path / "a.png")
    render_png(doc, tmp_path / "b.png")
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_tables():
    assert emit_table([], "tsv").splitlines() == ["piece\tpattern\tmultiplicity\tc\tc_bar\tc_tilde\tnote"]
    t = analyze_piece(designer_pieces()["wire"])
    text = emit_table([t], "text")
    tex = emit_table([t], "tex")
    assert "0.000 000 000" in text
    assert r"0.000\,000\,000" in tex and tex.rstrip().endswith(r"\end{tabular}")
    assert len(emit_table([t], "tsv").splitlines()) == 1 + len(t.rows)
