"""Beta-skeleton membership (edges forced into every MWT) and the diamond test."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .arithmetic import WORK_SCALE, IntInterval, ScaledInt, parse_fixed_decimal
from .geometry import Point, cross

# sqrt(1 + sqrt(4/27)), rounded down
MWT_SAFE_BETA = "1.17682"
PIECE_BETA = "1.1806"


@dataclass
class BetaReport:
    """Worst point for edge ``pq``.

    ``min_beta_sq_cos`` is the signed squared cosine ``cos(a)*|cos(a)|`` of the
    largest angle ``a = prq`` over the other points; the edge belongs to the
    beta-skeleton exactly for ``beta <= min_beta`` with
    ``1/min_beta**2 + cos(a)**2 = 1``.  No witness: no point constrains the edge.
    """

    edge: tuple[Point, Point]
    min_beta_sq_cos: Fraction | None
    min_beta: IntInterval | None
    witness: Point | None

    @property
    def unconstrained(self) -> bool:
        return self.witness is None

    def beta_squared(self) -> Fraction | None:
        if self.min_beta_sq_cos is None or self.min_beta_sq_cos <= 0:
            return None
        return 1 / (1 - self.min_beta_sq_cos)


def _signed_cos2(p, q, r) -> tuple[int, int] | None:
    """Numerator/denominator of the signed cos^2 of angle prq; None for a degenerate angle."""
    ax, ay = p[0] - r[0], p[1] - r[1]
    bx, by = q[0] - r[0], q[1] - r[1]
    dot = ax * bx + ay * by
    den = (ax * ax + ay * ay) * (bx * bx + by * by)
    if den == 0:
        return None
    num = dot * abs(dot)
    if num == den:
        # zero angle: r on the line beyond p or q, constrains nothing
        return None
    return num, den


def beta_from_cos2(c: Fraction, scale: int = WORK_SCALE) -> IntInterval | None:
    """Enclose ``1/sqrt(1 - c)``; None when the angle is not acute (beta below 1)."""
    if c <= 0:
        return None
    num, den = c.numerator, c.denominator
    # beta^2 * 10^(2 scale) = den * 10^(2 scale) / (den - num)
    top = den * 10 ** (2 * scale)
    q, r = divmod(top, den - num)
    lo = math.isqrt(q)
    up = q + (1 if r else 0)
    hi = math.isqrt(up)
    if hi * hi < up:
        hi += 1
    return IntInterval(lo, hi, scale)


def min_beta(p, q, others) -> BetaReport:
    p, q = Point(*p), Point(*q)
    best = None
    witness = None
    for r in others:
        r = Point(*r)
        if r == p or r == q:
            continue
        c = _signed_cos2(p, q, r)
        if c is None:
            continue
        # smaller signed cos^2 means a wider angle
        if best is None or c[0] * best[1] < best[0] * c[1] or (
                c[0] * best[1] == best[0] * c[1] and r < witness):
            best, witness = c, r
    if best is None:
        return BetaReport((p, q), None, None, None)
    frac = Fraction(best[0], best[1])
    return BetaReport((p, q), frac, beta_from_cos2(frac), witness)


def _as_threshold(beta) -> ScaledInt:
    if isinstance(beta, ScaledInt):
        return beta
    text = str(beta)
    return parse_fixed_decimal(text, len(text.split(".")[1]) if "." in text else 0)


def edge_passes(report: BetaReport, beta) -> bool:
    """True iff the edge's beta bound strictly exceeds ``beta``."""
    if report.unconstrained:
        return True
    b = _as_threshold(beta)
    c = report.min_beta_sq_cos
    if c <= 0:
        return False
    # c > 1 - 1/beta^2  <=>  num * B^2 > den * (B^2 - 10^(2s))
    B2 = b.value * b.value
    one = 10 ** (2 * b.scale)
    return c.numerator * B2 > c.denominator * (B2 - one)


@dataclass
class CertReport:
    threshold: ScaledInt
    passed: bool = True
    checked: int = 0
    violators: list[BetaReport] = field(default_factory=list)
    binding: BetaReport | None = None


def beta_skeleton_certify(boundary_edges, points, beta_threshold=PIECE_BETA, *,
                          local: bool = False) -> CertReport:
    """Certify every edge against all points (or, with ``local``, only points
    close enough to matter at the threshold)."""
    thr = _as_threshold(beta_threshold)
    rep = CertReport(thr)
    pts = [Point(*r) for r in points]
    for p, q in boundary_edges:
        p, q = Point(*p), Point(*q)
        cand = pts
        if local:
            cand = _near(p, q, pts, thr)
        br = min_beta(p, q, cand)
        rep.checked += 1
        if not br.unconstrained and (rep.binding is None or _worse(br, rep.binding)):
            rep.binding = br
        if not edge_passes(br, thr):
            rep.passed = False
            rep.violators.append(br)
    return rep


def _worse(a: BetaReport, b: BetaReport) -> bool:
    return a.min_beta_sq_cos < b.min_beta_sq_cos


def _near(p, q, pts, thr: ScaledInt):
    # both circles lie within beta*|pq| of the midpoint; compare at doubled coordinates
    mx, my = p[0] + q[0], p[1] + q[1]
    L2 = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
    B = thr.value + 1
    lim = 4 * L2 * B * B
    s = 10 ** (2 * thr.scale)
    return [r for r in pts if ((2 * r[0] - mx) ** 2 + (2 * r[1] - my) ** 2) * s <= lim]


# ---------------------------------------------------------------- diamond test

DIAMOND_DIVISOR = "4.6"
_TAN_SCALE = 30


def tan_enclosure(base_angle=None) -> tuple[int, int]:
    """Integer enclosure of ``tan(base_angle) * 10**30``; default angle pi/4.6."""
    with mpmath.workdps(60):
        a = mpmath.pi / mpmath.mpf(DIAMOND_DIVISOR) if base_angle is None else mpmath.mpf(base_angle)
        if not (0 < a < mpmath.pi / 2):
            raise ValueError("base angle must lie in (0, pi/2)")
        t = mpmath.tan(a) * mpmath.mpf(10) ** _TAN_SCALE
        return int(mpmath.floor(t)) - 1, int(mpmath.ceil(t)) + 1


def _linear_sign(c0: int, c1: int, tlo: int, thi: int) -> int:
    """Sign of ``c0 * 10**30 + c1 * t`` for t in [tlo, thi]; 0 when undecided or zero."""
    s = 10 ** _TAN_SCALE
    a, b = c0 * s + c1 * tlo, c0 * s + c1 * thi
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    return 0


def _maybe_inside(p, q, side: int, r, tlo, thi) -> bool:
    """Could r lie in the closed isosceles triangle on ``side`` (+1 left, -1 right) of pq?"""
    # work at doubled coordinates: M = p + q, H = perp(q - p), apex A = M + side*t*H
    P = (2 * p[0], 2 * p[1])
    Q = (2 * q[0], 2 * q[1])
    R = (2 * r[0], 2 * r[1])
    M = (p[0] + q[0], p[1] + q[1])
    H = (-(q[1] - p[1]) * side, (q[0] - p[0]) * side)
    base = cross(P, Q, R) * side
    if base < 0:
        return False
    # orient(Q, A, R) and orient(A, P, R) for the CCW triangle, linear in t
    def orient_to_apex(U, V_first: bool):
        # cross(U, A, R) if V_first else cross(A, U, R)
        ux, uy = U
        mx, my = M
        rx, ry = R
        if V_first:
            c0 = (mx - ux) * (ry - uy) - (my - uy) * (rx - ux)
            c1 = H[0] * (ry - uy) - H[1] * (rx - ux)
        else:
            # cross(A, U, R) = (U - A) x (R - A)
            c0 = (ux - mx) * (ry - my) - (uy - my) * (rx - mx)
            # d/dt of (U - M - tH) x (R - M - tH) = -H x (R - M) - (U - M) x H
            c1 = -(H[0] * (ry - my) - H[1] * (rx - mx)) - ((ux - mx) * H[1] - (uy - my) * H[0])
        return c0, c1

    first, second = (Q, P) if side == 1 else (P, Q)
    for U, flag in ((first, True), (second, False)):
        c0, c1 = orient_to_apex(U, flag)
        if _linear_sign(c0, c1, tlo, thi) < 0:
            return False
    return True


def diamond_test(p, q, others, base_angle=None) -> bool:
    """True iff one of the two isosceles triangles on base pq is free of other points.

    Containment is decided on an interval for the apex; an undecided point
    counts as present, so an edge is never wrongly rejected.
    """
    tlo, thi = tan_enclosure(base_angle)
    p, q = Point(*p), Point(*q)
    for side in (1, -1):
        if not any(_maybe_inside(p, q, side, r, tlo, thi) for r in others if r != p and r != q):
            return True
    return False
