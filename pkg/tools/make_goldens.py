"""Golden values for the designer W and piece set.

Every number comes from the interval DP and is cross-checked before it is
written: the full polygon cost against an mpmath top-down oracle, and every
sub-polygon of at most 14 vertices cut off by a witness chord against the
exhaustive enumerator (an optimal triangulation is optimal on each part).

Run from the repository root:  python3 tools/make_goldens.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from oracles import mp_mwt_cost  # noqa: E402

from mwthard.analysis import analyze_piece, check_terminal_lemma  # noqa: E402
from mwthard.geometry import Polygon  # noqa: E402
from mwthard.pieces import designer_pieces, designer_w, validate_piece  # noqa: E402
from mwthard.polygon_mwt import (BRUTE_FORCE_LIMIT, EdgeConstraint, NO_CONSTRAINT,  # noqa: E402
                                 brute_force_mwt, polygon_mwt)
from mwthard.skeleton import PIECE_BETA, beta_skeleton_certify  # noqa: E402

OUT = ROOT / "tests" / "data" / "designer_goldens.json"


def cross_check(poly: Polygon, constraint=NO_CONSTRAINT):
    res = polygon_mwt(poly, constraint)
    mp = mp_mwt_cost(poly.vertices, 0, [tuple(e) for e in constraint.forbidden])
    lo, hi = res.optimal_cost.lo, res.optimal_cost.hi
    scaled = mp * 10 ** (res.optimal_cost.scale - poly.scale)
    assert lo - 1 <= scaled <= hi + 1, (lo, hi, scaled)
    n = len(poly)
    subs = 0
    for i, k in res.witness.internal_edges:
        m = k - i + 1
        if 4 <= m <= BRUTE_FORCE_LIMIT:
            sub = Polygon(poly.vertices[i:k + 1], poly.scale)
            cons = EdgeConstraint.of([(a - i, b - i) for a, b in constraint.forbidden if i <= a and b <= k])
            assert brute_force_mwt(sub, cons).same_outcome(polygon_mwt(sub, cons)), (i, k)
            subs += 1
        if 4 <= n - m + 2 <= BRUTE_FORCE_LIMIT:
            verts = poly.vertices[k:] + poly.vertices[:i + 1]
            idx = list(range(k, n)) + list(range(0, i + 1))
            pos = {v: t for t, v in enumerate(idx)}
            cons = EdgeConstraint.of([(pos[a], pos[b]) for a, b in constraint.forbidden if a in pos and b in pos])
            sub = Polygon(verts, poly.scale)
            assert brute_force_mwt(sub, cons).same_outcome(polygon_mwt(sub, cons)), (k, i)
            subs += 1
    return res, subs


def iv(x):
    return [str(x.lo), str(x.hi)]


def main():
    w = designer_w()
    lemma = check_terminal_lemma(w)
    cases = []
    checked = 0
    for c in lemma.cases:
        poly, xi, yi, zi = w.case_polygon(c.i, c.j)
        _, s1 = cross_check(poly)
        _, s2 = cross_check(poly, EdgeConstraint.of([(xi, yi), (xi, zi)]))
        checked += s1 + s2
        cases.append({"i": c.i, "j": c.j, "unrestricted": iv(c.unrestricted), "restricted": iv(c.restricted),
                      "multiplicity": c.multiplicity, "gap": str(c.gap)})
    pieces = {}
    for p in designer_pieces():
        rep = validate_piece(p, w)
        assert rep.ok, rep.failures
        table = analyze_piece(p)
        rows = {}
        for r in table.rows:
            _, s = cross_check(p.pattern_polygon(r.pattern))
            checked += s
            rows[r.pattern] = {"multiplicity": r.multiplicity, "cost": iv(r.cost),
                               "c": r.cost.display(), "c_bar": r.reduced.display(),
                               "c_tilde": r.relative.display()}
        cert = beta_skeleton_certify(p.boundary_edges(), p.cycle(), PIECE_BETA)
        b = cert.binding
        pieces[p.name] = {"patterns": rows, "beta_pass": cert.passed, "edges_checked": cert.checked,
                          "binding_cos2": f"{b.min_beta_sq_cos.numerator}/{b.min_beta_sq_cos.denominator}"}
    data = {"scale": 15, "lemma": {"cases": cases, "min_gap": str(lemma.min_gap),
                                   "min_case": [lemma.min_case.i, lemma.min_case.j],
                                   "e_max": lemma.e_max, "margin": str(lemma.margin)},
            "pieces": pieces, "subpolygons_brute_forced": checked}
    OUT.write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({checked} sub-polygons brute-forced)")


if __name__ == "__main__":
    main()
