"""Build the designer piece set from the designer W.

Run from the repository root:  python3 tools/design_pieces.py
Writes src/mwthard/data/designer_pieces.txt.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from mwthard.geometry import Point  # noqa: E402
from mwthard.pieces import (DATA_DIR, Piece, PieceCatalog, SMALL, TerminalTriangle,  # noqa: E402
                            designer_w, format_pieces, w_copy_map)

W = designer_w().points
PERIOD = 2 * W["v0'"].x            # 27.4


def at(apex, label):
    return apex + W[label]


def _mid(p, q):
    s = p + q
    assert s.x % 2 == 0 and s.y % 2 == 0, (p, q)
    return Point(s.x // 2, s.y // 2)


def wire_chain(apexes):
    """Bottom and top boundary chains of a straight run of wire periods.

    Terminals open downwards at the given apexes; points shared by
    neighbouring periods sit at the midpoint of the two copies.
    """
    bottom, top = [], []
    n = len(apexes)
    for k, a in enumerate(apexes):
        if k > 0:
            bottom.append(_mid(at(apexes[k - 1], "v6'"), at(a, "v6")))
            bottom += [at(a, f"v{i}") for i in range(5, 0, -1)]
        bottom += [at(a, "z"), at(a, "y")]
        if k < n - 1:
            bottom += [at(a, f"v{i}'") for i in range(1, 6)]
    for k in range(n - 1, -1, -1):
        a = apexes[k]
        top.append(at(a, "x"))
        if k > 0:
            top += [at(a, "u"), _mid(at(apexes[k - 1], "v0'"), at(a, "v0")), at(apexes[k - 1], "u'")]
    return bottom, top


def wire_piece(name, apexes, symmetry_x=None):
    """Two outer terminals; inner apexes and corners are plain boundary points."""
    bottom, top = wire_chain(apexes)
    terms = [TerminalTriangle(apexes[0], SMALL, 2, "R"), TerminalTriangle(apexes[-1], SMALL, 2, "L")]
    return Piece(name, [("bottom", bottom), ("top", top)], terms, symmetry_x)


def tee_piece(name="tee"):
    """Straight run with a downward branch between its two halves.

    The branch terminal is rotated a quarter turn; its W_right copy runs up
    the branch towards the junction.
    """
    gap = P(6.1, 0).x
    a, b = P(-13.7, 0) - Point(gap, 0), P(13.7, 0) + Point(gap, 0)
    ta, tb = TerminalTriangle(a, SMALL, 2, "R"), TerminalTriangle(b, SMALL, 2, "L")
    tc = TerminalTriangle(P(-6.1, -31.9), SMALL, 3, "R")
    wc = w_copy_map(dp_w(), tc, "right")
    # one filler point per wall keeps the junction corners beta-clean
    left_wall = [P(-6.0, -14.2), wc["v0'"], wc["u'"], wc["x"]]
    right_wall = [wc["z"], wc["y"]] + [wc[f"v{i}'"] for i in range(1, 7)] + [P(6.0, -14.2)]
    bottom = [at(a, "z"), at(a, "y")] + [at(a, f"v{i}'") for i in range(1, 7)] + left_wall
    bottom += right_wall + [at(b, f"v{i}") for i in range(6, 0, -1)] + [at(b, "z"), at(b, "y")]
    top = [at(b, "x"), at(b, "u"), at(b, "v0"), at(a, "v0'"), at(a, "u'"), at(a, "x")]
    return Piece(name, [("bottom", bottom), ("top", top)], [ta, tb, tc])


def dp_w():
    return designer_w()


def P(x, y):
    return Point(round(x * 10000), round(y * 10000))


def build() -> PieceCatalog:
    cat = PieceCatalog()
    cat.pieces["wire"] = wire_piece("wire", [P(-13.7, 0), P(13.7, 0)], 0)
    cat.pieces["extended-wire"] = wire_piece(
        "extended-wire", [P(-41.1, 0), P(-13.7, 0), P(13.71, 0), P(41.11, 0)], P(0.005, 0).x)
    cat.pieces["tee"] = tee_piece()
    return cat


if __name__ == "__main__":
    header = "# designer piece set generated by tools/design_pieces.py from designer_W.txt\n"
    (DATA_DIR / "designer_pieces.txt").write_text(header + format_pieces(build()), encoding="utf-8")
