"""Integer points, orientation, simple polygons and a triangulation checker."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .arithmetic import IntInterval, ScaledInt, parse_fixed_decimal


class Point(NamedTuple):
    """Point with integer coordinates; the scale lives on the owning container."""

    x: int
    y: int

    def __add__(self, other):
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def rotated(self, quarter_turns: int) -> "Point":
        x, y = self
        for _ in range(quarter_turns % 4):
            x, y = -y, x
        return Point(x, y)

    def format(self, scale: int) -> str:
        return f"{ScaledInt(self.x, scale)} {ScaledInt(self.y, scale)}"

    @classmethod
    def parse(cls, xs: str, ys: str, scale: int) -> "Point":
        return cls(parse_fixed_decimal(xs, scale).value, parse_fixed_decimal(ys, scale).value)


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


def cross(p, q, r) -> int:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def orientation(p, q, r) -> Orientation:
    c = cross(p, q, r)
    if c > 0:
        return Orientation.CCW
    if c < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def doubled_area(points: Sequence) -> int:
    n = len(points)
    return sum(points[i][0] * points[(i + 1) % n][1] - points[(i + 1) % n][0] * points[i][1]
               for i in range(n))


def _on_segment(p, q, r) -> bool:
    """r collinear with pq lies within its bounding box."""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def segments_intersect(a, b, c, d, *, proper_only: bool = False) -> bool:
    o1, o2 = cross(a, b, c), cross(a, b, d)
    o3, o4 = cross(c, d, a), cross(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    if proper_only:
        return False
    return ((o1 == 0 and _on_segment(a, b, c)) or (o2 == 0 and _on_segment(a, b, d))
            or (o3 == 0 and _on_segment(c, d, a)) or (o4 == 0 and _on_segment(c, d, b)))


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[Point, ...]
    scale: int = 0

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(Point(*v) for v in self.vertices))
        if len(self.vertices) < 3:
            raise ValueError("a polygon needs at least 3 vertices")

    def __len__(self):
        return len(self.vertices)

    def __getitem__(self, i):
        return self.vertices[i]

    def mirrored(self) -> "Polygon":
        """Reflect across the vertical axis, reversing order to stay counterclockwise."""
        return Polygon(tuple(Point(-x, y) for x, y in reversed(self.vertices)), self.scale)

    @classmethod
    def from_decimals(cls, pairs, scale: int) -> "Polygon":
        return cls(tuple(Point.parse(str(x), str(y), scale) for x, y in pairs), scale)


@dataclass
class ValidationReport:
    ok: bool = True
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def fail(self, msg: str):
        self.ok = False
        self.failures.append(msg)

    def note(self, msg: str):
        self.notes.append(msg)

    def merge(self, other: "ValidationReport", prefix: str = ""):
        for f in other.failures:
            self.fail(prefix + f)
        self.notes.extend(prefix + n for n in other.notes)

    def __bool__(self):
        return self.ok


def validate_simple_polygon(poly: Polygon) -> ValidationReport:
    rep = ValidationReport()
    v = poly.vertices
    n = len(v)
    seen = {}
    for i, p in enumerate(v):
        if p in seen:
            rep.fail(f"duplicate: vertices {seen[p]} and {i} coincide")
        seen.setdefault(p, i)
    area = doubled_area(v)
    if area <= 0:
        rep.fail("orientation: polygon is not counterclockwise")
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = v[j], v[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # neighbours share a vertex; they only clash by folding back onto each other
                shared, p, q = (b, a, d) if j == i + 1 else (a, b, c)
                dot = (p[0] - shared[0]) * (q[0] - shared[0]) + (p[1] - shared[1]) * (q[1] - shared[1])
                if cross(p, shared, q) == 0 and dot > 0:
                    rep.fail(f"crossing: edges {i} and {j} overlap")
                continue
            if segments_intersect(a, b, c, d):
                rep.fail(f"crossing: edges {i} and {j} intersect")
    for i in range(n):
        if orientation(v[i - 1], v[i], v[(i + 1) % n]) == Orientation.COLLINEAR:
            rep.note(f"collinear boundary triple at vertex {i}")
    return rep


class TriangulationStatus(enum.Enum):
    VALID = "Valid"
    VALID_DEGENERATE = "ValidDegenerate"
    INVALID = "Invalid"


@dataclass(frozen=True)
class Triangulation:
    triangles: frozenset
    internal_edges: frozenset
    cost: IntInterval
    degenerate: bool = False

    @classmethod
    def from_triangles(cls, n: int, triangles, cost: IntInterval, degenerate: bool = False):
        tris = frozenset(tuple(sorted(t)) for t in triangles)
        return cls(tris, internal_edges_of(n, tris), cost, degenerate)

    def edges(self, n: int) -> set[tuple[int, int]]:
        return set(self.internal_edges) | {(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)}


def internal_edges_of(n: int, triangles) -> frozenset:
    out = set()
    for t in triangles:
        i, j, k = sorted(t)
        for a, b in ((i, j), (j, k), (i, k)):
            if not (b - a == 1 or (a == 0 and b == n - 1)):
                out.add((a, b))
    return frozenset(out)


def check_triangulation(poly: Polygon, triangles) -> TriangulationStatus:
    """Check index triples against the orientation-and-edge-count criterion."""
    n = len(poly)
    tris = [tuple(sorted(t)) for t in triangles]
    if len(tris) != n - 2 or len(set(tris)) != len(tris):
        return TriangulationStatus.INVALID
    uses: dict[tuple[int, int], int] = {}
    degenerate = False
    for i, j, k in tris:
        if not (0 <= i < j < k < n):
            return TriangulationStatus.INVALID
        o = orientation(poly[i], poly[j], poly[k])
        if o == Orientation.CW:
            return TriangulationStatus.INVALID
        if o == Orientation.COLLINEAR:
            degenerate = True
        for e in ((i, j), (j, k), (i, k)):
            uses[e] = uses.get(e, 0) + 1
    for i in range(n):
        e = (min(i, (i + 1) % n), max(i, (i + 1) % n))
        if uses.pop(e, 0) != 1:
            return TriangulationStatus.INVALID
    if any(c != 2 for c in uses.values()):
        return TriangulationStatus.INVALID
    return TriangulationStatus.VALID_DEGENERATE if degenerate else TriangulationStatus.VALID


def parse_polygon(text: str) -> Polygon:
    """One ``x y`` decimal pair per line, ``#`` comments; scale is the longest fraction."""
    pairs = []
    for no, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        tok = ln.split()
        if len(tok) != 2:
            raise ValueError(f"line {no}: expected 'x y', got {ln!r}")
        pairs.append((tok[0], tok[1]))
    if len(pairs) < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    scale = max(len(t.split(".", 1)[1]) if "." in t else 0 for pair in pairs for t in pair)
    return Polygon.from_decimals(pairs, scale)


def format_polygon(poly: Polygon) -> str:
    return "".join(f"{p.format(poly.scale)}\n" for p in poly.vertices)
