"""Fixed-point decimals and integer intervals.

Every quantity is an integer ``value`` standing for ``value * 10**-scale``.
Nothing here touches floating point; sums of square roots are compared
through closed integer enclosures.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

WORK_SCALE = 15
DISPLAY_DIGITS = 9

_DECIMAL_RE = re.compile(r"^([+-]?)(\d+)(?:\.(\d*))?$")


class MalformedNumber(ValueError):
    pass


class TooManyFractionDigits(ValueError):
    pass


class NegativeRadicand(ValueError):
    pass


class Ordering(enum.Enum):
    LESS = "Less"
    GREATER = "Greater"
    OVERLAPPING = "Overlapping"


def _pow10(k: int) -> int:
    return 10**k


@dataclass(frozen=True, order=False)
class ScaledInt:
    value: int
    scale: int = 0

    def __post_init__(self):
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")

    def rescale(self, scale: int) -> "ScaledInt":
        if scale < self.scale:
            q, r = divmod(self.value, _pow10(self.scale - scale))
            if r:
                raise TooManyFractionDigits(f"{self} is not representable at scale {scale}")
            return ScaledInt(q, scale)
        return ScaledInt(self.value * _pow10(scale - self.scale), scale)

    def _common(self, other: "ScaledInt") -> tuple[int, int, int]:
        s = max(self.scale, other.scale)
        return self.rescale(s).value, other.rescale(s).value, s

    def __add__(self, other):
        if isinstance(other, int):
            other = ScaledInt(other)
        a, b, s = self._common(other)
        return ScaledInt(a + b, s)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = ScaledInt(other)
        a, b, s = self._common(other)
        return ScaledInt(a - b, s)

    def __neg__(self):
        return ScaledInt(-self.value, self.scale)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return ScaledInt(self.value * k, self.scale)

    __rmul__ = __mul__

    def _cmp(self, other) -> int:
        if isinstance(other, int):
            other = ScaledInt(other)
        a, b, _ = self._common(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if not isinstance(other, (ScaledInt, int)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        # equal values at different scales must hash alike
        v, s = self.value, self.scale
        while s and v % 10 == 0:
            v //= 10
            s -= 1
        return hash((v, s))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def is_multiple_of(self, step: "ScaledInt") -> bool:
        a, b, _ = self._common(step)
        return a % b == 0

    def to_interval(self) -> "IntInterval":
        return IntInterval(self.value, self.value, self.scale)

    def format(self, digits: int | None = None, group: str | None = None) -> str:
        """Canonical decimal text; ``digits`` pads the fraction to a fixed width."""
        if digits is None:
            digits = self.scale
        v = self.rescale(digits).value
        sign = "-" if v < 0 else ""
        v = abs(v)
        whole, frac = divmod(v, _pow10(digits))
        whole_s = str(whole)
        frac_s = str(frac).rjust(digits, "0") if digits else ""
        if group is not None:
            whole_s = _group_left(whole_s, group)
            frac_s = _group_right(frac_s, group)
        return sign + whole_s + ("." + frac_s if digits else "")

    def canonical(self) -> str:
        """Shortest decimal text that parses back to the same value."""
        if self.value == 0:
            return "0"
        v, s = self.value, self.scale
        while s and v % 10 == 0:
            v //= 10
            s -= 1
        return ScaledInt(v, s).format(s)

    def __str__(self):
        return self.canonical()

    def __repr__(self):
        return f"ScaledInt({self.canonical()})"


def _group_left(s: str, sep: str) -> str:
    out = []
    while len(s) > 3:
        out.insert(0, s[-3:])
        s = s[:-3]
    out.insert(0, s)
    return sep.join(out)


def _group_right(s: str, sep: str) -> str:
    return sep.join(s[i:i + 3] for i in range(0, len(s), 3))


def parse_fixed_decimal(text: str, scale: int) -> ScaledInt:
    """Parse ``text`` exactly into a :class:`ScaledInt` at ``scale``.

    >>> parse_fixed_decimal("-2.7", 4)
    ScaledInt(-2.7)
    """
    m = _DECIMAL_RE.match(text.strip())
    if m is None:
        raise MalformedNumber(f"not a finite decimal: {text!r}")
    sign, whole, frac = m.groups()
    frac = frac or ""
    if len(frac.rstrip("0")) > scale:
        raise TooManyFractionDigits(f"{text!r} needs more than {scale} fractional digits")
    frac = frac[:scale] if len(frac) > scale else frac
    value = int(whole) * _pow10(scale) + (int(frac) * _pow10(scale - len(frac)) if frac else 0)
    return ScaledInt(-value if sign == "-" else value, scale)


@dataclass(frozen=True)
class IntInterval:
    """Closed interval ``[lo, hi] * 10**-scale``."""

    lo: int
    hi: int
    scale: int = WORK_SCALE

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value: int, scale: int = WORK_SCALE) -> "IntInterval":
        return cls(value, value, scale)

    @classmethod
    def zero(cls, scale: int = WORK_SCALE) -> "IntInterval":
        return cls(0, 0, scale)

    def rescale(self, scale: int) -> "IntInterval":
        """Re-express at ``scale``; coarsening rounds outward."""
        if scale >= self.scale:
            f = _pow10(scale - self.scale)
            return IntInterval(self.lo * f, self.hi * f, scale)
        f = _pow10(self.scale - scale)
        return IntInterval(self.lo // f, -((-self.hi) // f), scale)

    def _check(self, other: "IntInterval"):
        if self.scale != other.scale:
            raise ValueError("interval scales differ; rescale first")

    def __add__(self, other):
        if isinstance(other, ScaledInt):
            other = other.rescale(self.scale).to_interval()
        self._check(other)
        return IntInterval(self.lo + other.lo, self.hi + other.hi, self.scale)

    def __sub__(self, other):
        if isinstance(other, ScaledInt):
            other = other.rescale(self.scale).to_interval()
        self._check(other)
        return IntInterval(self.lo - other.hi, self.hi - other.lo, self.scale)

    def __neg__(self):
        return IntInterval(-self.hi, -self.lo, self.scale)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        a, b = self.lo * k, self.hi * k
        return IntInterval(min(a, b), max(a, b), self.scale)

    __rmul__ = __mul__

    @property
    def width(self) -> int:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, other) -> bool:
        if isinstance(other, ScaledInt):
            other = other.rescale(max(other.scale, self.scale)).to_interval()
        s = max(self.scale, other.scale)
        a, b = self.rescale(s), other.rescale(s)
        return a.lo <= b.lo and b.hi <= a.hi

    def hull(self, other: "IntInterval") -> "IntInterval":
        self._check(other)
        return IntInterval(min(self.lo, other.lo), max(self.hi, other.hi), self.scale)

    def lower(self) -> ScaledInt:
        return ScaledInt(self.lo, self.scale)

    def upper(self) -> ScaledInt:
        return ScaledInt(self.hi, self.scale)

    def rounded(self, digits: int = DISPLAY_DIGITS) -> ScaledInt | None:
        """The unique ``digits``-place rounding of every value inside, else None.

        A displayed ``0.000051402`` promises the true value lies strictly
        inside ``(0.0000514015, 0.0000514025)``; a bound sitting exactly on a
        rounding midpoint therefore counts as ambiguous.
        """
        if digits >= self.scale:
            if self.lo != self.hi:
                return None
            return ScaledInt(self.lo, self.scale).rescale(digits)
        f = _pow10(self.scale - digits)
        half = f // 2 if f % 2 == 0 else None

        def nearest(v: int) -> tuple[int, bool]:
            q, r = divmod(v, f)
            if half is not None and r == half:
                return q, True
            return (q + 1 if 2 * r > f else q), False

        a, a_tie = nearest(self.lo)
        b, b_tie = nearest(self.hi)
        if a != b or a_tie or b_tie:
            return None
        return ScaledInt(a, digits)

    def display(self, digits: int = DISPLAY_DIGITS, group: str | None = None) -> str:
        r = self.rounded(digits)
        if r is not None:
            return r.format(digits, group)
        lo = self.rescale(digits)
        return "[{},{}]".format(
            ScaledInt(lo.lo, digits).format(digits, group),
            ScaledInt(lo.hi, digits).format(digits, group),
        )

    def __str__(self):
        return "[{},{}]".format(self.lower().format(), self.upper().format())


def interval_isqrt(n: int) -> IntInterval:
    """Enclose ``sqrt(n)`` by ``[s, s]`` or ``[s, s + 1]`` with ``s = floor(sqrt(n))``."""
    if n < 0:
        raise NegativeRadicand(f"square root of negative {n}")
    s = math.isqrt(n)
    if not (s * s <= n < (s + 1) * (s + 1)):
        raise ArithmeticError("isqrt postcondition violated")
    if s * s == n:
        return IntInterval(s, s, 0)
    return IntInterval(s, s + 1, 0)


def squared_distance(p, q) -> int:
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def edge_length(p, q, coord_scale: int = 0, out_scale: int = WORK_SCALE) -> IntInterval:
    """Enclosure of ``|pq| * 10**out_scale`` for integer points at ``coord_scale``.

    ``p`` and ``q`` are integer pairs (or :class:`ScaledInt` pairs, which are
    brought to their common scale first).
    """
    if isinstance(p[0], ScaledInt):
        coord_scale = max(c.scale for c in (*p, *q))
        p = tuple(c.rescale(coord_scale).value for c in p)
        q = tuple(c.rescale(coord_scale).value for c in q)
    if out_scale < coord_scale:
        raise ValueError("output scale must not be coarser than the coordinates")
    n = squared_distance(p, q) * _pow10(2 * (out_scale - coord_scale))
    r = interval_isqrt(n)
    return IntInterval(r.lo, r.hi, out_scale)


def interval_compare(a: IntInterval, b: IntInterval) -> Ordering:
    if a.scale != b.scale:
        s = max(a.scale, b.scale)
        a, b = a.rescale(s), b.rescale(s)
    if a.hi < b.lo:
        return Ordering.LESS
    if a.lo > b.hi:
        return Ordering.GREATER
    return Ordering.OVERLAPPING


def interval_sum(items, scale: int = WORK_SCALE) -> IntInterval:
    lo = hi = 0
    for iv in items:
        if iv.scale != scale:
            iv = iv.rescale(scale)
        lo += iv.lo
        hi += iv.hi
    return IntInterval(lo, hi, scale)
