"""Pieces, terminal triangles and the point set W.

Coordinates are integers at ``COORD_SCALE`` (units of 0.0001).  A piece is a
cyclic sequence of boundary points, split into named parts, plus two or
three terminal triangles.  The cycle passes through every terminal's apex
and both base corners; the corner next to the apex is the one whose
terminal edge keeps the triangle inside the piece.  Dropping that corner
gives the other state.

Terminal letters: ``L`` is the arm ``xy``, ``R`` the arm ``xz``, with
``y = apex + rot(axis)(-2.7, 11.2)`` for a small triangle (scaled by 4.3 for
a large one).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .arithmetic import ScaledInt, parse_fixed_decimal
from .geometry import Point, Polygon, ValidationReport, cross, validate_simple_polygon

COORD_SCALE = 4
TERMINAL_GRID = 100          # 0.01 at COORD_SCALE
SMALL, LARGE = "small", "large"
LARGE_FACTOR = (43, 10)

# apex-relative corners in Table-I orientation (triangle opening upwards)
_CORNER = {SMALL: Point(-27000, 112000), LARGE: Point(-116100, 481600)}
DELTA = {SMALL: ScaledInt(5655172, 6), LARGE: ScaledInt(2406, 2)}


class MalformedFile(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class TerminalTriangle:
    apex: Point
    size: str
    axis: int
    area_state: str

    @property
    def delta(self) -> ScaledInt:
        return DELTA[self.size]

    @property
    def left(self) -> Point:
        """Corner of the L arm."""
        return self.apex + _CORNER[self.size].rotated(self.axis)

    @property
    def right(self) -> Point:
        c = _CORNER[self.size]
        return self.apex + Point(-c.x, c.y).rotated(self.axis)

    def corner(self, state: str) -> Point:
        return self.left if state == "L" else self.right

    def on_grid(self) -> bool:
        return all(c % TERMINAL_GRID == 0 for p in (self.apex, self.left, self.right) for c in p)


@dataclass
class Piece:
    name: str
    parts: list[tuple[str, list[Point]]]
    terminals: list[TerminalTriangle]
    symmetry_x: int | None = None   # declared vertical mirror axis, COORD_SCALE units
    scale: int = COORD_SCALE

    def cycle(self) -> list[Point]:
        return [p for _, pts in self.parts for p in pts]

    @property
    def points(self) -> list[Point]:
        return self.cycle()

    def letters(self) -> list[tuple[str, str]]:
        """Per-terminal state letters; in mixed-size pieces the small terminal is lowercase."""
        mixed = len({t.size for t in self.terminals}) > 1
        return [("l", "r") if mixed and t.size == SMALL else ("L", "R") for t in self.terminals]

    def patterns(self) -> list[str]:
        out = [""]
        for a, b in self.letters():
            out = [s + c for s in out for c in (a, b)]
        return out

    def _near_corner(self, t: TerminalTriangle) -> Point:
        cyc = self.cycle()
        i = cyc.index(t.apex)
        n = len(cyc)
        for j in ((i - 1) % n, (i + 1) % n):
            if cyc[j] in (t.left, t.right):
                return cyc[j]
        raise ValueError(f"{self.name}: no base corner next to apex {t.apex}")

    def pattern_polygon(self, pattern: str) -> Polygon:
        states = [c.upper() for c in pattern]
        drop = set()
        for t, s in zip(self.terminals, states):
            if s != t.area_state:
                drop.add(self._near_corner(t))
        return Polygon(tuple(p for p in self.cycle() if p not in drop), self.scale)

    def included(self, pattern: str) -> list[bool]:
        return [c.upper() == t.area_state for c, t in zip(pattern, self.terminals)]

    def boundary_edges(self) -> list[tuple[Point, Point]]:
        """Cycle edges without the terminal arms."""
        cyc = self.cycle()
        arms = set()
        for t in self.terminals:
            for c in (t.left, t.right):
                arms.add(frozenset((t.apex, c)))
        n = len(cyc)
        return [(cyc[i], cyc[(i + 1) % n]) for i in range(n)
                if frozenset((cyc[i], cyc[(i + 1) % n])) not in arms]

    def mirrored(self) -> "Piece":
        """Reflection in the vertical line through the declared axis (or x = 0)."""
        ax2 = 2 * (self.symmetry_x or 0)

        def m(p):
            return Point(ax2 - p.x, p.y)

        cyc = [m(p) for p in self.cycle()]
        cyc.reverse()
        terms = []
        for t in self.terminals:
            # reflection swaps the arms and turns axis k into -k
            terms.append(TerminalTriangle(m(t.apex), t.size, (-t.axis) % 4,
                                          "L" if t.area_state == "R" else "R"))
        return Piece(self.name + "'", [("mirrored", cyc)], terms, self.symmetry_x, self.scale)


@dataclass
class PieceCatalog:
    pieces: dict[str, Piece] = field(default_factory=dict)

    def __getitem__(self, name):
        return self.pieces[name]

    def __iter__(self):
        return iter(self.pieces.values())

    def __len__(self):
        return len(self.pieces)

    def names(self) -> list[str]:
        return list(self.pieces)


# ------------------------------------------------------------------ file format

def _coord(tok: str, line: int) -> int:
    try:
        return parse_fixed_decimal(tok, COORD_SCALE).value
    except ValueError as exc:
        raise MalformedFile(line, str(exc)) from None


def load_pieces(source) -> PieceCatalog:
    """Parse piece text (or a path).  Strict: unknown records, stray points and
    coordinates with more than four fraction digits are errors."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    cat = PieceCatalog()
    cur = None
    part = None

    def finish(no):
        if cur is None:
            return
        if not cur.parts:
            raise MalformedFile(no, f"piece {cur.name} has no parts")
        if not 2 <= len(cur.terminals) <= 3:
            raise MalformedFile(no, f"piece {cur.name} needs 2 or 3 terminals")
        cat.pieces[cur.name] = cur

    no = 0
    for no, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        tok = ln.split()
        head = tok[0]
        if head == "piece":
            if len(tok) != 2:
                raise MalformedFile(no, "expected: piece <name>")
            finish(no)
            if tok[1] in cat.pieces:
                raise MalformedFile(no, f"duplicate piece {tok[1]}")
            cur, part = Piece(tok[1], [], []), None
        elif cur is None:
            raise MalformedFile(no, "record outside a piece")
        elif head == "part":
            if len(tok) != 2:
                raise MalformedFile(no, "expected: part <name>")
            part = []
            cur.parts.append((tok[1], part))
        elif head == "terminal":
            if len(tok) != 6:
                raise MalformedFile(no, "expected: terminal <size> <x> <y> <axis> <area-state>")
            size, ax, ay, axis, state = tok[1:]
            if size not in (SMALL, LARGE):
                raise MalformedFile(no, f"unknown terminal size {size!r}")
            if state not in ("L", "R"):
                raise MalformedFile(no, f"area state must be L or R, not {state!r}")
            try:
                k = int(axis)
            except ValueError:
                raise MalformedFile(no, f"axis must be an integer, not {axis!r}") from None
            cur.terminals.append(TerminalTriangle(Point(_coord(ax, no), _coord(ay, no)), size, k % 4, state))
        elif head == "symmetry":
            if len(tok) != 3 or tok[1] != "x":
                raise MalformedFile(no, "expected: symmetry x <value>")
            cur.symmetry_x = _coord(tok[2], no)
        elif len(tok) == 2:
            if part is None:
                raise MalformedFile(no, "point before any part")
            part.append(Point(_coord(tok[0], no), _coord(tok[1], no)))
        else:
            raise MalformedFile(no, f"unrecognised record {ln!r}")
    finish(no)
    return cat


def _fmt(v: int) -> str:
    return ScaledInt(v, COORD_SCALE).canonical()


def format_pieces(cat) -> str:
    out = []
    for p in cat:
        out.append(f"piece {p.name}")
        if p.symmetry_x is not None:
            out.append(f"symmetry x {_fmt(p.symmetry_x)}")
        for t in p.terminals:
            out.append(f"terminal {t.size} {_fmt(t.apex.x)} {_fmt(t.apex.y)} {t.axis} {t.area_state}")
        for name, pts in p.parts:
            out.append(f"part {name}")
            out.extend(f"{_fmt(q.x)} {_fmt(q.y)}" for q in pts)
        out.append("")
    return "\n".join(out)


# ------------------------------------------------------------------ the set W

W_LABELS = ("x", "y", "z", "u", "u'", "v0", "v0'") + tuple(f"v{k}" for k in range(1, 7)) + \
    tuple(f"v{k}'" for k in range(1, 7))


@dataclass
class WInstance:
    """Labelled points of W in the orientation with the terminal opening downwards
    (x at the origin, y on the right)."""

    points: dict[str, Point]
    scale: int = COORD_SCALE

    def half(self, side: str) -> dict[str, Point]:
        """``W_left`` or ``W_right``: one half plus x, y and z."""
        out = {k: p for k, p in self.points.items() if k in ("x", "y", "z")}
        for k, p in self.points.items():
            if k.startswith(("u", "v")) and k.endswith("'") == (side == "right"):
                out[k] = p
        return out

    def exclusion_polygon(self) -> Polygon:
        """The outline of W; no foreign point may lie inside."""
        seq = ["v0"] + [f"v{k}" for k in range(6, 0, -1)] + ["z", "y"] + \
            [f"v{k}'" for k in range(1, 7)] + ["v0'", "u'", "x", "u"]
        return Polygon(tuple(self.points[k] for k in seq), self.scale)

    def case_polygon(self, i: int, j: int) -> tuple[Polygon, int, int, int]:
        """Polygon bounded by ``u v_i`` and ``u' v'_j``; returns it with the indices of x, y, z."""
        P = self.points
        seq = ["u"] + [f"v{k}" for k in range(i, 0, -1)] + ["z", "y"] + [f"v{k}'" for k in range(1, j + 1)] + ["u'", "x"]
        poly = Polygon(tuple(P[k] for k in seq), self.scale)
        return poly, len(seq) - 1, seq.index("y"), seq.index("z")

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        missing = [k for k in W_LABELS if k not in self.points]
        if missing:
            rep.fail(f"W: missing labels {missing}")
            return rep
        P = self.points
        if P["x"] != Point(0, 0):
            rep.fail("W: x must sit at the origin")
        if P["y"] != Point(27000, -112000) or P["z"] != Point(-27000, -112000):
            rep.fail("W: y, z must be the small terminal corners")
        for k, p in P.items():
            m = k[:-1] if k.endswith("'") else k + "'"
            if k in ("x", "y", "z"):
                continue
            if P.get(m) != Point(-p.x, p.y):
                rep.fail(f"W: {k} and {m} not mirror images")
        if P["v0"].y != 0 or P["v0'"].y != 0:
            rep.fail("W: v0, v0' must lie on the x-axis")
        if P["u"].y != -1000 or P["u'"].y != -1000:
            rep.fail("W: u, u' must lie 0.1 below the x-axis")
        return rep


def load_w(source) -> WInstance:
    text = Path(source).read_text(encoding="utf-8") if isinstance(source, Path) else source
    pts = {}
    for no, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        tok = ln.split()
        if len(tok) != 3:
            raise MalformedFile(no, "expected: <label> <x> <y>")
        if tok[0] in pts:
            raise MalformedFile(no, f"duplicate label {tok[0]}")
        pts[tok[0]] = Point(_coord(tok[1], no), _coord(tok[2], no))
    return WInstance(pts)


def format_w(w: WInstance) -> str:
    return "\n".join(f"{k} {_fmt(p.x)} {_fmt(p.y)}" for k, p in w.points.items()) + "\n"


DATA_DIR = Path(__file__).with_name("data")


def designer_w() -> WInstance:
    return load_w(DATA_DIR / "designer_W.txt")


def designer_pieces() -> PieceCatalog:
    return load_pieces(DATA_DIR / "designer_pieces.txt")


# ------------------------------------------------------------------ W copies

def _scale_point(p: Point, size: str) -> Point | None:
    if size == SMALL:
        return p
    num, den = LARGE_FACTOR
    x, y = p.x * num, p.y * num
    if x % den or y % den:
        return None
    return Point(x // den, y // den)


def w_copy_map(w: WInstance, t: TerminalTriangle, side: str) -> dict[str, Point | None]:
    """Where each point of ``W_side`` lands for terminal ``t``.

    W opens downwards, Table I upwards: the map is apex + rot(axis + 2)(scaled p).
    """
    out = {}
    for k, p in w.half(side).items():
        q = _scale_point(p, t.size)
        out[k] = None if q is None else t.apex + q.rotated(t.axis + 2)
    return out


def find_w_copy(w: WInstance, piece: Piece, t: TerminalTriangle) -> tuple[str | None, list[str]]:
    """Return the matching half (or None) and, for the best half, the labels that did not match."""
    pts = set(piece.cycle())
    best = None
    for side in ("left", "right"):
        image = w_copy_map(w, t, side)
        miss = [k for k, q in image.items() if q is None or q not in pts]
        if not miss:
            return side, []
        if best is None or len(miss) < len(best):
            best = miss
    return None, best or []


# ------------------------------------------------------------------ validation

def validate_piece(p: Piece, w: WInstance | None = None, beta: str | None = None, *,
                   local_beta: bool = True) -> ValidationReport:
    """Structural checks, W copies at every terminal and boundary beta-certification."""
    from .skeleton import PIECE_BETA, beta_skeleton_certify

    rep = ValidationReport()
    cyc = p.cycle()
    seen = {}
    for i, q in enumerate(cyc):
        if q in seen:
            rep.fail(f"duplicate: point {q.format(p.scale)} at positions {seen[q]} and {i}")
        seen.setdefault(q, i)
    if p.scale != COORD_SCALE:
        rep.fail(f"granularity: coordinates must be at scale {COORD_SCALE}")
    for k, t in enumerate(p.terminals):
        if not t.on_grid():
            rep.fail(f"terminal {k}: coordinates are not multiples of 0.01")
        for label, c in (("apex", t.apex), ("L corner", t.left), ("R corner", t.right)):
            if c not in seen:
                rep.fail(f"terminal {k}: {label} {c.format(p.scale)} not on the boundary")
        if t.apex in seen and t.left in seen and t.right in seen:
            try:
                near = p._near_corner(t)
            except ValueError as exc:
                rep.fail(f"terminal {k}: {exc}")
            else:
                declared = t.corner(t.area_state)
                if near != declared:
                    rep.fail(f"terminal {k}: declared area state {t.area_state} disagrees with the boundary order")
    if not rep.ok:
        return rep
    for pat in p.patterns():
        sub = validate_simple_polygon(p.pattern_polygon(pat))
        for f in sub.failures:
            rep.fail(f"pattern {pat}: {f}")
    if p.symmetry_x is not None:
        ax2 = 2 * p.symmetry_x
        mirrored = {Point(ax2 - q.x, q.y) for q in cyc}
        if mirrored != set(cyc):
            rep.fail(f"symmetry: not symmetric about x = {ScaledInt(p.symmetry_x, p.scale)}")
        else:
            rep.note(f"symmetric with respect to the vertical axis x={ScaledInt(p.symmetry_x, p.scale)}")
    if w is not None:
        for k, t in enumerate(p.terminals):
            side, miss = find_w_copy(w, p, t)
            if side is None:
                rep.fail(f"terminal {k}: no congruent copy of W_left or W_right (missing {', '.join(miss[:6])})")
            else:
                rep.note(f"terminal {k}: contains W_{side}")
    cert = beta_skeleton_certify(p.boundary_edges(), cyc, beta or PIECE_BETA, local=local_beta)
    rep.note(f"{cert.checked} boundary edges checked at beta {cert.threshold}")
    if cert.binding is not None:
        b = cert.binding
        shown = b.min_beta.display(6) if b.min_beta is not None else "< 1"
        rep.note(f"binding edge {b.edge[0].format(p.scale)} -- {b.edge[1].format(p.scale)}: "
                 f"cos^2 = {b.min_beta_sq_cos}, beta = {shown}")
    for v in cert.violators:
        rep.fail(f"beta: edge {v.edge[0].format(p.scale)} -- {v.edge[1].format(p.scale)} "
                 f"blocked by {v.witness.format(p.scale)}")
    return rep


def point_in_polygon(pt, poly: Polygon) -> bool:
    """Strict interior test by winding number on integer data."""
    v = poly.vertices
    n = len(v)
    wn = 0
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        c = cross(a, b, pt)
        if c == 0 and min(a.x, b.x) <= pt[0] <= max(a.x, b.x) and min(a.y, b.y) <= pt[1] <= max(a.y, b.y):
            return False
        if a.y <= pt[1] < b.y and c > 0:
            wn += 1
        elif b.y <= pt[1] < a.y and c < 0:
            wn -= 1
    return wn != 0
