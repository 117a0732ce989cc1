"""Minimum-weight triangulation of a simple polygon.

The dynamic program runs over vertex ranges ``(i, k)`` and accepts the
triangle ``(i, j, k)`` whenever it is counterclockwise or collinear; for a
simple counterclockwise polygon that alone guarantees a proper
triangulation, so no crossing tests are made.  Collinear triangles are kept
but mark everything built on them as degenerate.

Costs are internal costs: the summed length of the chords, boundary edges
excluded.  Each edge length is an integer enclosure at ``WORK_SCALE``, so a
triangulation's cost is an interval ``[lo, hi]``.  Two results follow:

* the *optimal cost*: the interval of the triangulation with the smallest
  lower bound (ties: smallest upper bound).  It encloses the true optimum.
* the *multiplicity*: the number of triangulations that cannot be excluded,
  i.e. whose lower bound does not exceed the smallest upper bound of all.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .arithmetic import WORK_SCALE, IntInterval, edge_length
from .geometry import Orientation, Polygon, Triangulation, orientation

BRUTE_FORCE_LIMIT = 14


class MwtError(Exception):
    pass


class NoFeasibleTriangulation(MwtError):
    pass


class OnlyDegenerateOptimal(MwtError):
    pass


class TooLarge(MwtError):
    pass


@dataclass(frozen=True)
class EdgeConstraint:
    forbidden: frozenset = frozenset()

    @classmethod
    def of(cls, pairs) -> "EdgeConstraint":
        return cls(frozenset((min(a, b), max(a, b)) for a, b in pairs))

    def blocks(self, i: int, k: int) -> bool:
        return (i, k) in self.forbidden


NO_CONSTRAINT = EdgeConstraint()


@dataclass
class MwtResult:
    optimal_cost: IntInterval
    witness: Triangulation
    multiplicity: int
    candidates_degenerate: bool
    best_upper: int
    # (cost interval, number of triangulations) for every candidate that could not be excluded
    candidates: list[tuple[IntInterval, int]] = field(default_factory=list)

    def same_outcome(self, other: "MwtResult") -> bool:
        return (self.optimal_cost == other.optimal_cost and self.multiplicity == other.multiplicity
                and self.candidates_degenerate == other.candidates_degenerate
                and self.best_upper == other.best_upper)


def _is_boundary(n: int, i: int, k: int) -> bool:
    return k - i == 1 or (i == 0 and k == n - 1)


def _chord_lengths(poly: Polygon, scale: int):
    n = len(poly)
    lo = [[0] * n for _ in range(n)]
    hi = [[0] * n for _ in range(n)]
    for i in range(n):
        for k in range(i + 2, n):
            if _is_boundary(n, i, k):
                continue
            iv = edge_length(poly[i], poly[k], poly.scale, scale)
            lo[i][k], hi[i][k] = iv.lo, iv.hi
    return lo, hi


def polygon_mwt(poly: Polygon, constraint: EdgeConstraint = NO_CONSTRAINT,
                scale: int = WORK_SCALE, *, allow_degenerate: bool = False) -> MwtResult:
    n = len(poly)
    pts = poly.vertices
    wlo, whi = _chord_lengths(poly, scale)
    blocked = [[False] * n for _ in range(n)]
    for i, k in constraint.forbidden:
        if not _is_boundary(n, i, k):
            blocked[i][k] = True

    # tri_ok[i][j][k]: 0 unusable, 1 proper, 2 collinear
    def tri_kind(i, j, k):
        o = orientation(pts[i], pts[j], pts[k])
        if o == Orientation.CW:
            return 0
        return 1 if o == Orientation.CCW else 2

    INF = None
    # best[i][k] = (lo, hi, j); minlo / minhi are the independent minima
    best = [[INF] * n for _ in range(n)]
    minhi = [[INF] * n for _ in range(n)]
    kinds = {}
    for i in range(n - 1):
        best[i][i + 1] = (0, 0, -1)
        minhi[i][i + 1] = 0
    for d in range(2, n):
        for i in range(0, n - d):
            k = i + d
            if blocked[i][k]:
                continue
            cell = None
            mh = None
            for j in range(i + 1, k):
                a, b = best[i][j], best[j][k]
                if a is None or b is None:
                    continue
                kind = tri_kind(i, j, k)
                if not kind:
                    continue
                kinds[(i, j, k)] = kind
                lo = a[0] + b[0] + wlo[i][j] + wlo[j][k]
                hi = a[1] + b[1] + whi[i][j] + whi[j][k]
                if cell is None or (lo, hi) < (cell[0], cell[1]):
                    cell = (lo, hi, j)
                h = minhi[i][j] + minhi[j][k] + whi[i][j] + whi[j][k]
                if mh is None or h < mh:
                    mh = h
            best[i][k] = cell
            minhi[i][k] = mh
    root = best[0][n - 1]
    if root is None:
        raise NoFeasibleTriangulation("no triangulation avoids the forbidden edges")
    best_hi = minhi[0][n - 1]

    # outside[i][k]: least lower-bound cost of everything outside cell (i, k), chord included
    outside = [[None] * n for _ in range(n)]
    outside[0][n - 1] = 0
    for d in range(n - 1, 1, -1):
        for i in range(0, n - d):
            k = i + d
            o = outside[i][k]
            if o is None or best[i][k] is None:
                continue
            for j in range(i + 1, k):
                if (i, j, k) not in kinds or best[i][j] is None or best[j][k] is None:
                    continue
                left = o + best[j][k][0] + wlo[j][k] + wlo[i][j]
                right = o + best[i][j][0] + wlo[i][j] + wlo[j][k]
                if outside[i][j] is None or left < outside[i][j]:
                    outside[i][j] = left
                if outside[j][k] is None or right < outside[j][k]:
                    outside[j][k] = right

    # cands[i][k]: {(lo, hi): [count, proper_count]} over partial triangulations
    # that can still extend to a triangulation with lower bound <= best_hi
    cands = [[None] * n for _ in range(n)]
    for i in range(n - 1):
        cands[i][i + 1] = {(0, 0): [1, 1]}
    for d in range(2, n):
        for i in range(0, n - d):
            k = i + d
            o = outside[i][k]
            if o is None or best[i][k] is None:
                continue
            budget = best_hi - o
            acc: dict = {}
            for j in range(i + 1, k):
                kind = kinds.get((i, j, k))
                if not kind:
                    continue
                L, R = cands[i][j], cands[j][k]
                if not L or not R:
                    continue
                elo = wlo[i][j] + wlo[j][k]
                ehi = whi[i][j] + whi[j][k]
                for (l1, h1), (c1, p1) in L.items():
                    for (l2, h2), (c2, p2) in R.items():
                        lo = l1 + l2 + elo
                        if lo > budget:
                            continue
                        key = (lo, h1 + h2 + ehi)
                        slot = acc.setdefault(key, [0, 0])
                        slot[0] += c1 * c2
                        if kind == 1:
                            slot[1] += p1 * p2
            cands[i][k] = acc
    final = cands[0][n - 1]
    multiplicity = sum(c for c, _ in final.values())
    proper = sum(p for _, p in final.values())
    if proper == 0 and not allow_degenerate:
        raise OnlyDegenerateOptimal("every surviving optimum uses a collinear triangle")

    triangles = []
    degenerate = False
    stack = [(0, n - 1)]
    while stack:
        i, k = stack.pop()
        if k - i < 2:
            continue
        j = best[i][k][2]
        triangles.append((i, j, k))
        degenerate |= kinds[(i, j, k)] == 2
        stack.extend(((i, j), (j, k)))
    cost = IntInterval(root[0], root[1], scale)
    witness = Triangulation.from_triangles(n, triangles, cost, degenerate)
    cand_list = [(IntInterval(lo, hi, scale), c) for (lo, hi), (c, _) in sorted(final.items())]
    return MwtResult(cost, witness, multiplicity, proper < multiplicity, best_hi, cand_list)


def enumerate_triangulations(poly: Polygon, constraint: EdgeConstraint = NO_CONSTRAINT):
    """Yield every triangulation as a tuple of index triples, via fan recursion on edge (0, n-1)."""
    n = len(poly)
    if n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"{n} vertices exceeds the enumeration budget of {BRUTE_FORCE_LIMIT}")
    pts = poly.vertices
    memo: dict = {}

    def sub(i, k):
        if k - i < 2:
            return [()]
        if (i, k) in memo:
            return memo[(i, k)]
        out = []
        if not (constraint.blocks(i, k) and not _is_boundary(n, i, k)):
            for j in range(i + 1, k):
                if orientation(pts[i], pts[j], pts[k]) == Orientation.CW:
                    continue
                for a, b in product(sub(i, j), sub(j, k)):
                    out.append(a + b + ((i, j, k),))
        memo[(i, k)] = out
        return out

    yield from sub(0, n - 1)


def brute_force_mwt(poly: Polygon, constraint: EdgeConstraint = NO_CONSTRAINT,
                    scale: int = WORK_SCALE, *, allow_degenerate: bool = False) -> MwtResult:
    """Exhaustive oracle with the same contract as :func:`polygon_mwt`."""
    n = len(poly)
    pts = poly.vertices
    lengths: dict = {}
    evaluated = []
    for tris in enumerate_triangulations(poly, constraint):
        edges = set()
        for t in tris:
            a, b, c = t
            edges.update(((a, b), (b, c), (a, c)))
        internal = [e for e in edges if not _is_boundary(n, *e)]
        if any(e in constraint.forbidden for e in internal):
            continue
        lo = hi = 0
        for e in internal:
            if e not in lengths:
                lengths[e] = edge_length(pts[e[0]], pts[e[1]], poly.scale, scale)
            lo += lengths[e].lo
            hi += lengths[e].hi
        degenerate = any(orientation(pts[a], pts[b], pts[c]) == Orientation.COLLINEAR for a, b, c in tris)
        evaluated.append((lo, hi, tris, degenerate))
    if not evaluated:
        raise NoFeasibleTriangulation("no triangulation avoids the forbidden edges")
    best_hi = min(e[1] for e in evaluated)
    lo, hi, tris, degenerate = min(evaluated, key=lambda e: (e[0], e[1]))
    counted = [e for e in evaluated if e[0] <= best_hi]
    proper = sum(1 for e in counted if not e[3])
    if proper == 0 and not allow_degenerate:
        raise OnlyDegenerateOptimal("every surviving optimum uses a collinear triangle")
    groups: dict = {}
    for e in counted:
        groups[(e[0], e[1])] = groups.get((e[0], e[1]), 0) + 1
    cost = IntInterval(lo, hi, scale)
    witness = Triangulation.from_triangles(n, tris, cost, degenerate)
    cand_list = [(IntInterval(a, b, scale), c) for (a, b), c in sorted(groups.items())]
    return MwtResult(cost, witness, len(counted), proper < len(counted), best_hi, cand_list)


def worker_count(requested: int | None = None) -> int:
    if requested:
        return requested
    env = os.environ.get("MWT_WORKERS")
    return int(env) if env else 1


def _solve(job):
    poly, constraint, scale = job
    try:
        return polygon_mwt(poly, constraint, scale, allow_degenerate=True)
    except MwtError as exc:
        return exc


def solve_many(jobs, workers: int | None = None) -> list:
    """Run independent DP jobs ``(poly, constraint, scale)``; results keep input order.

    Failures come back as exception instances rather than being raised.
    """
    jobs = list(jobs)
    workers = worker_count(workers)
    if workers <= 1 or len(jobs) <= 1:
        return [_solve(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_solve, jobs))
