import random

import numpy as np

from mwthard.costmodel import (DELTA1, DELTA2, DELTA3, EPS1, EPS2, CostTables, FactorGraph, clause_ring_costs,
                               link_cost, mirror_pattern)
from mwthard.layout import straight_connection

T = CostTables.from_paper()


def test_link_costs():
    L, R = 0, 1
    assert link_cost(T, L, L) == EPS2
    assert link_cost(T, L, R) == DELTA1 + EPS2
    assert link_cost(T, R, L) == DELTA2
    assert link_cost(T, R, R) == EPS2


def test_ring_ranks_exactly_one_first():
    ring = clause_ring_costs(T)
    best = min(ring.values())
    assert {k for k, v in ring.items() if v == best} == {"RRL", "RLR", "LRR"}
    assert min(ring["LLL"], ring["RRR"]) > DELTA3


def test_mirror_table():
    assert mirror_pattern("LRl") == "LRr"
    for p in ("LLl", "RLr", "RRl"):
        assert T.cost("C'", p) == T.cost("C", mirror_pattern(p))


def test_thickening_defaults():
    assert T.cost("thickening", "LL") == EPS1 and T.cost("thinning", "RR") == EPS1


def _random_graph(rng):
    fg = FactorGraph()
    n = rng.randint(1, 12)
    for _ in range(n):
        fg.add_var()
    for _ in range(rng.randint(0, 16)):
        k = rng.randint(1, min(3, n))
        vs = tuple(rng.sample(range(n), k))
        fg.add_factor(vs, np.array([rng.randint(0, 50) for _ in range(2 ** k)], dtype=np.int64).reshape((2,) * k))
    return fg, n


def test_elimination_matches_brute_force():
    rng = random.Random(17)
    for _ in range(300):
        fg, n = _random_graph(rng)
        fixed = {v: rng.randint(0, 1) for v in rng.sample(range(n), rng.randint(0, n // 2))}
        cost, assign = fg.minimize(fixed)
        assert cost == fg.brute_force(fixed)[0]
        assert fg.evaluate(assign) == cost
        assert all(assign[v] == b for v, b in fixed.items())


def test_wire_run_factor_matches_elimination():
    plan = straight_connection(5 * 8221 + 7 * 2740, mini=True)
    fg = FactorGraph()
    prev = fg.add_var()
    first = prev
    for kind, *_ in plan.pieces():
        nxt = fg.add_var()
        fg.add_factor((prev, nxt), T.tables[kind])
        prev = nxt
    f = plan.factor(T)
    for a in (0, 1):
        for b in (0, 1):
            assert f[a, b] == fg.minimize({first: a, prev: b})[0]
    # a chain of zero-diagonal pieces propagates state at no cost
    assert f[0, 0] == f[1, 1] == 0 and f[0, 1] > 0
