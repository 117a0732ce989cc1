import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from polygons import random_star_polygon

from mwthard.pieces import designer_pieces
from mwthard.polygon_mwt import OnlyDegenerateOptimal, brute_force_mwt
from mwthard.skeleton import MWT_SAFE_BETA, beta_skeleton_certify, diamond_test, edge_passes, min_beta


def test_min_beta_by_hand():
    r = min_beta((0, 0), (2, 0), [(1, 2)])
    assert r.min_beta_sq_cos == Fraction(9, 25)
    assert r.beta_squared() == Fraction(25, 16)
    assert r.min_beta.lo <= 125 * 10 ** 13 <= r.min_beta.hi
    assert r.witness == (1, 2)


def test_no_witness():
    r = min_beta((0, 0), (2, 0), [])
    assert r.unconstrained and edge_passes(r, "100")
    assert beta_skeleton_certify([((0, 0), (1, 0))], [(0, 0), (1, 0)], "3").passed


def test_exact_relation():
    rng = random.Random(4)
    for _ in range(200):
        pts = [(rng.randint(-50, 50), rng.randint(-50, 50)) for _ in range(3)]
        if len(set(pts)) < 3:
            continue
        r = min_beta(pts[0], pts[1], [pts[2]])
        if r.beta_squared() is not None:
            assert 1 / r.beta_squared() + r.min_beta_sq_cos == 1


def test_threshold_boundary():
    r = min_beta((0, 0), (2, 0), [(1, 2)])      # beta exactly 1.25
    assert edge_passes(r, "1.2499")
    assert not edge_passes(r, "1.25")


@settings(max_examples=50, deadline=None, derandomize=True)
@given(st.lists(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), min_size=3, max_size=8, unique=True),
       st.integers(2, 9))
def test_scale_invariance(pts, k):
    p, q, rest = pts[0], pts[1], pts[2:]
    a = min_beta(p, q, rest)
    b = min_beta((p[0] * k, p[1] * k), (q[0] * k, q[1] * k), [(x * k, y * k) for x, y in rest])
    assert a.min_beta_sq_cos == b.min_beta_sq_cos
    assert diamond_test(p, q, rest) == diamond_test(b.edge[0], b.edge[1], [(x * k, y * k) for x, y in rest])


def test_diamond_examples():
    assert diamond_test((0, 0), (10, 0), [])
    assert diamond_test((0, 0), (100, 0), [(50, 1)])
    assert not diamond_test((0, 0), (100, 0), [(50, 1), (50, -1)])
    assert diamond_test((0, 0), (100, 0), [(50, 60), (50, -60)])


def test_beta_skeleton_chords_in_mwt():
    rng = random.Random(8)
    checked = 0
    while checked < 40:
        poly = random_star_polygon(rng, 8, 60)
        if poly is None:
            continue
        try:
            res = brute_force_mwt(poly)
        except OnlyDegenerateOptimal:
            continue
        if res.multiplicity != 1:
            continue
        checked += 1
        v = poly.vertices
        n = len(v)
        all_chords = set()
        from mwthard.polygon_mwt import enumerate_triangulations
        for tris in enumerate_triangulations(poly):
            for a, b, c in tris:
                all_chords.update({(a, b), (b, c), (a, c)})
        for i, j in all_chords:
            if j - i == 1 or (i == 0 and j == n - 1):
                continue
            if edge_passes(min_beta(v[i], v[j], v), MWT_SAFE_BETA):
                assert (i, j) in res.witness.internal_edges


def test_designer_pieces_certify():
    for p in designer_pieces():
        rep = beta_skeleton_certify(p.boundary_edges(), p.cycle(), "1.1806")
        assert rep.passed, p.name
        # just above the binding bound the binding edge fails
        b = rep.binding
        above = f"{float(b.min_beta.hi) / 10 ** 15 + 1e-6:.7f}"
        again = beta_skeleton_certify(p.boundary_edges(), p.cycle(), above)
        assert not again.passed
