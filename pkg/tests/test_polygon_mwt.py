import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import mp_mwt_cost
from polygons import polygons, random_star_polygon

from mwthard.arithmetic import IntInterval
from mwthard.geometry import Polygon, check_triangulation, TriangulationStatus
from mwthard.polygon_mwt import (EdgeConstraint, NoFeasibleTriangulation, OnlyDegenerateOptimal, TooLarge,
                                 brute_force_mwt, enumerate_triangulations, polygon_mwt, solve_many)

SQUARE = Polygon(((0, 0), (1, 0), (1, 1), (0, 1)))


def test_square_two_optima():
    r = polygon_mwt(SQUARE)
    assert r.multiplicity == 2
    assert r.optimal_cost.display(9) == "1.414213562"
    assert len(r.witness.internal_edges) == 1


def test_triangle_has_no_chords():
    r = polygon_mwt(Polygon(((0, 0), (2, 0), (0, 2))))
    assert r.optimal_cost == IntInterval.zero()
    assert r.multiplicity == 1


def test_forbidden_diagonal_forces_the_other():
    r = polygon_mwt(SQUARE, EdgeConstraint.of([(0, 2)]))
    assert r.multiplicity == 1
    assert set(r.witness.internal_edges) == {(1, 3)}
    with pytest.raises(NoFeasibleTriangulation):
        polygon_mwt(SQUARE, EdgeConstraint.of([(0, 2), (1, 3)]))


def test_witness_is_a_triangulation():
    for poly in polygons(random.Random(1), 30, 5, 10):
        r = polygon_mwt(poly, allow_degenerate=True)
        assert check_triangulation(poly, r.witness.triangles) in (TriangulationStatus.VALID,
                                                                  TriangulationStatus.VALID_DEGENERATE)


def test_catalan_counts():
    convex = [Polygon(tuple((round(1000 * math.cos(2 * math.pi * k / n)),
                             round(1000 * math.sin(2 * math.pi * k / n))) for k in range(n)))
              for n in range(3, 10)]
    catalan = [1, 2, 5, 14, 42, 132, 429]
    assert [sum(1 for _ in enumerate_triangulations(p)) for p in convex] == catalan


def test_brute_force_limit():
    big = Polygon(tuple((k, k * k) for k in range(16)))
    with pytest.raises(TooLarge):
        brute_force_mwt(big)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(0, 10 ** 9), st.integers(5, 11))
def test_float_oracle_agrees(seed, n):
    poly = random_star_polygon(random.Random(seed), n)
    if poly is None:
        return
    try:
        r = polygon_mwt(poly)
    except OnlyDegenerateOptimal:
        return
    ref = mp_mwt_cost(poly.vertices, poly.scale)
    lo = IntInterval(r.optimal_cost.lo, r.optimal_cost.hi, 15)
    assert lo.lo - 1 <= ref * 10 ** 15 <= lo.hi + 1


def test_solve_many_keeps_order():
    polys = polygons(random.Random(3), 6, 5, 8)
    jobs = [(p, EdgeConstraint(), 15) for p in polys]
    seq = solve_many(jobs, 1)
    par = solve_many(jobs, 2)
    assert [r.optimal_cost for r in seq] == [r.optimal_cost for r in par]
