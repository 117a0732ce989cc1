"""Random simple polygons for oracle comparisons."""

import math

from mwthard.geometry import Polygon, validate_simple_polygon


def random_star_polygon(rng, n, box=40, scale=0):
    """Integer points sorted by angle around the box centre; None if not simple."""
    c = box / 2
    pts = set()
    while len(pts) < n:
        pts.add((rng.randint(0, box), rng.randint(0, box)))
    pts = sorted(pts, key=lambda p: (math.atan2(p[1] - c, p[0] - c), (p[0] - c) ** 2 + (p[1] - c) ** 2))
    poly = Polygon(tuple(pts), scale)
    return poly if validate_simple_polygon(poly).ok else None


def polygons(rng, count, n_lo=5, n_hi=12, box=40):
    out = []
    while len(out) < count:
        p = random_star_polygon(rng, rng.randint(n_lo, n_hi), box)
        if p is not None:
            out.append(p)
    return out
