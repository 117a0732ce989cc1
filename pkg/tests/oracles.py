"""Independent float oracle for polygon MWT costs.

Top-down recursion with mpmath square roots; shares nothing with the
interval DP except the input points.
"""

from functools import lru_cache

import mpmath

mpmath.mp.dps = 40


def mp_mwt_cost(points, scale, forbidden=()):
    """Optimal internal cost of a CCW simple polygon, or None if infeasible."""
    pts = [(mpmath.mpf(x) / 10 ** scale, mpmath.mpf(y) / 10 ** scale) for x, y in points]
    raw = list(points)
    n = len(pts)
    bad = {frozenset(e) for e in forbidden}

    def boundary(i, k):
        return k - i == 1 or (i == 0 and k == n - 1)

    def ok_chord(i, k):
        return boundary(i, k) or frozenset((i, k)) not in bad

    def length(i, k):
        if boundary(i, k):
            return mpmath.mpf(0)
        return mpmath.sqrt((pts[i][0] - pts[k][0]) ** 2 + (pts[i][1] - pts[k][1]) ** 2)

    def ccw_or_flat(i, j, k):
        (ax, ay), (bx, by), (cx, cy) = raw[i], raw[j], raw[k]
        return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) >= 0

    @lru_cache(maxsize=None)
    def best(i, k):
        if k - i < 2:
            return mpmath.mpf(0)
        if not ok_chord(i, k):
            return None
        out = None
        for j in range(i + 1, k):
            if not ccw_or_flat(i, j, k):
                continue
            a, b = best(i, j), best(j, k)
            if a is None or b is None:
                continue
            c = a + b + length(i, j) + length(j, k)
            if out is None or c < out:
                out = c
        return out

    return best(0, n - 1)
