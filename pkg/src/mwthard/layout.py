"""From a 1-in-3 formula with a rectilinear embedding to a gadget network.

Layout coordinates are integers in hundredths (terminal apexes sit on the
0.01 grid).  Two modes:

* ``proof``: corridor width 2000, bends in 700 x 700 boxes, every straight
  run bridged by wire and extended wire pieces at distances above 230 000;
  one embedding grid unit is 10**6 length units.
* ``mini``: the same structure shrunk so every run is a few wire pieces long.
  Not proof-grade: the long-distance preconditions do not hold.

Pieces without coordinates in the catalog (connections, bends, adapters)
are laid out as boxes and enter the weight only through the state cost model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .arithmetic import ScaledInt, parse_fixed_decimal
from .costmodel import DELTA4, L, R, CostTables, FactorGraph, fmt_cost
from .embedding import UP, RectilinearEmbedding, layout as embed_layout, validate_embedding
from .geometry import Point, ValidationReport

WIRE_SPAN = 2740            # 27.4 in hundredths
EXT_SPAN = 8221             # 82.21
MIN_Z = 3 * WIRE_SPAN * (WIRE_SPAN - 1)     # 22 514 580
LONG_PORTION = 25_000_000   # 250 000


class LayoutError(ValueError):
    pass


class TooShort(LayoutError):
    pass


class NotGridAligned(LayoutError):
    pass


class CorridorTooTight(LayoutError):
    pass


class MissingStraightPortion(LayoutError):
    pass


class LayoutConflict(LayoutError):
    pass


class AmbiguousWeight(LayoutError):
    pass


@dataclass(frozen=True)
class ModeSpec:
    name: str
    unit: int            # one embedding grid unit
    width: int          # corridor width
    bend_half: int      # half side of a bend box
    loop: int           # bit loop box side
    clause: int         # clause gadget box side
    internal: int       # nominal length of a link inside a clause gadget
    proof_grade: bool


PROOF = ModeSpec("proof", 10 ** 8, 200_000, 35_000, 700_000, 25_000_000, 24_000_000, True)
# mini sizes keep every run a multiple of the wire period
MINI = ModeSpec("mini", 14 * WIRE_SPAN, 1000, 3 * WIRE_SPAN // 2, 3 * WIRE_SPAN, 7 * WIRE_SPAN, 2 * WIRE_SPAN, False)
MODES = {"proof": PROOF, "mini": MINI}

_DIRS = [Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1)]


def _hundredths(d) -> int:
    if isinstance(d, ScaledInt):
        if d.scale > 2 and d.rescale(2).rescale(d.scale) != d:
            raise NotGridAligned(f"distance {d} is not a multiple of 0.01")
        return d.rescale(2).value if d.scale >= 2 else d.value * 10 ** (2 - d.scale)
    if isinstance(d, str):
        try:
            return parse_fixed_decimal(d, 2).value
        except ValueError as exc:
            raise NotGridAligned(str(exc)) from None
    raise TypeError("distance must be a ScaledInt or decimal string")


# ------------------------------------------------------------------ wire plans

@dataclass
class Step:
    kind: str
    count: int
    start: Point
    direction: int
    span: int                 # per piece along the direction (bends: half box)
    turn: int = 0             # bends: +1 left, -1 right

    @property
    def end(self) -> Point:
        d = _DIRS[self.direction]
        if self.turn:
            e = _DIRS[(self.direction + self.turn) % 4]
            return self.start + Point((d.x + e.x) * self.span, (d.y + e.y) * self.span)
        return self.start + Point(d.x * self.span * self.count, d.y * self.span * self.count)


@dataclass
class WirePlan:
    steps: list[Step] = field(default_factory=list)
    length: int = 0
    proof_grade: bool = True

    def total_span(self) -> int:
        return sum(s.span * (2 if s.turn else s.count) for s in self.steps)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.steps:
            out[s.kind] = out.get(s.kind, 0) + s.count
        return out

    def piece_count(self) -> int:
        return sum(s.count for s in self.steps)

    def pieces(self):
        """Yield (kind, start, direction, end) for every piece."""
        for s in self.steps:
            if s.turn:
                yield s.kind, s.start, s.direction, s.end
                continue
            d = _DIRS[s.direction]
            for k in range(s.count):
                a = s.start + Point(d.x * s.span * k, d.y * s.span * k)
                yield s.kind, a, s.direction, a + Point(d.x * s.span, d.y * s.span)

    @property
    def start(self) -> Point:
        return self.steps[0].start

    @property
    def end(self) -> Point:
        return self.steps[-1].end

    def factor(self, tables: CostTables) -> np.ndarray:
        """Exact 2x2 cost between the end states: min-plus product along the run."""
        acc = None
        for s in self.steps:
            m = _minplus_power(tables.tables[s.kind], s.count)
            acc = m if acc is None else _minplus(acc, m)
        return acc


def _minplus(a, b):
    return np.min(a[:, :, None] + b[None, :, :], axis=1)


def _minplus_power(m, k):
    out = None
    base = m
    while k:
        if k & 1:
            out = base if out is None else _minplus(out, base)
        base = _minplus(base, base)
        k >>= 1
    return out


def wire_counts(z: int) -> tuple[int, int]:
    """``(extended, wires)`` bridging z hundredths: y = z mod 2740 extended pieces."""
    y = z % WIRE_SPAN
    return y, z // WIRE_SPAN - 3 * y


def straight_connection(d, start: Point = Point(0, 0), direction: int = 0, *, mini: bool = False) -> WirePlan:
    """Wire plan over a straight distance ``d``.

    Without ``mini`` the distance must exceed 230 000 so that the mixture
    always exists; ``mini`` drops that bound and fails only when no mixture fits.
    """
    z = _hundredths(d) if not isinstance(d, int) else d
    if not mini and z < MIN_Z:
        raise TooShort(f"distance {ScaledInt(z, 2)} below {ScaledInt(MIN_Z, 2)}")
    y, w = wire_counts(z)
    if w < 0 or z <= 0:
        raise TooShort(f"distance {ScaledInt(z, 2)} cannot be bridged by wire pieces")
    plan = WirePlan(length=z, proof_grade=not mini)
    cur = start
    for kind, count, span in (("extended-wire", y, EXT_SPAN), ("wire", w, WIRE_SPAN)):
        if count:
            st = Step(kind, count, cur, direction, span)
            plan.steps.append(st)
            cur = st.end
    assert plan.total_span() == z
    return plan


def _direction(a: Point, b: Point) -> int:
    dx, dy = b.x - a.x, b.y - a.y
    if dx and dy or not (dx or dy):
        raise LayoutError(f"path segment {a} -> {b} is not axis-parallel")
    if dx:
        return 0 if dx > 0 else 2
    return 1 if dy > 0 else 3


def route_corridor(path, mode: ModeSpec = PROOF) -> WirePlan:
    """Bends at the corners of a rectilinear path and straight connections between them."""
    pts = [Point(*p) for p in path]
    if len(pts) < 2:
        raise LayoutError("a corridor needs two points")
    dirs = [_direction(a, b) for a, b in zip(pts, pts[1:])]
    for d1, d2 in zip(dirs, dirs[1:]):
        if d1 == d2 or (d1 - d2) % 4 == 2:
            raise LayoutError("corridor path must turn at every interior point")
    lengths = [abs(b.x - a.x) + abs(b.y - a.y) for a, b in zip(pts, pts[1:])]
    if mode.proof_grade:
        for axis in {d % 2 for d in dirs}:
            if max(le for le, d in zip(lengths, dirs) if d % 2 == axis) < LONG_PORTION:
                raise MissingStraightPortion(
                    f"no {'horizontal' if axis == 0 else 'vertical'} straight portion of 250000")
    plan = WirePlan(length=sum(lengths), proof_grade=mode.proof_grade)
    h = mode.bend_half
    cur = pts[0]
    for k, (d, le) in enumerate(zip(dirs, lengths)):
        run = le - (h if k > 0 else 0) - (h if k < len(dirs) - 1 else 0)
        if run <= 0:
            raise CorridorTooTight(f"segment {k} too short for its bends")
        try:
            sub = straight_connection(run, cur, d, mini=not mode.proof_grade)
        except TooShort as exc:
            raise CorridorTooTight(f"segment {k}: {exc}") from None
        plan.steps += sub.steps
        cur = sub.end
        if k < len(dirs) - 1:
            turn = 1 if (dirs[k + 1] - d) % 4 == 1 else -1
            st = Step("left-bend" if turn == 1 else "right-bend", 1, cur, d, h, turn)
            plan.steps.append(st)
            cur = st.end
    if cur != pts[-1] or plan.total_span() != plan.length:
        raise LayoutError("corridor plan does not re-sum to the path")
    return plan


# ------------------------------------------------------------------ gadget graph

@dataclass
class Terminal:
    size: str
    pos: Point
    label: str


@dataclass
class PieceInst:
    kind: str
    terminals: tuple[int, ...]
    group: str
    label: str


@dataclass
class Run:
    plan: WirePlan
    ends: tuple[int, int]
    group: str
    label: str
    corridor: int | None = None


@dataclass
class Corridor:
    name: str
    path: list[Point]
    boxes: tuple[str, str]       # gadget boxes at its two ends


@dataclass
class Box:
    name: str
    lo: Point
    hi: Point
    group: str


@dataclass
class Loop:
    name: str
    group: str
    large: list[int]
    slots: list[tuple[str, int | None]]     # (kind, small terminal)


@dataclass
class GadgetGraph:
    mode: ModeSpec
    variables: list[str] = field(default_factory=list)
    clauses: list[tuple[str, str, str]] = field(default_factory=list)
    terminals: list[Terminal] = field(default_factory=list)
    pieces: list[PieceInst] = field(default_factory=list)
    runs: list[Run] = field(default_factory=list)
    corridors: list[Corridor] = field(default_factory=list)
    boxes: dict[str, Box] = field(default_factory=dict)
    loops: dict[str, Loop] = field(default_factory=dict)
    chains: dict[str, list[str]] = field(default_factory=dict)
    clause_roles: list[dict[str, str]] = field(default_factory=list)

    def add_terminal(self, size, pos, label) -> int:
        self.terminals.append(Terminal(size, Point(*pos), label))
        return len(self.terminals) - 1

    def incidence(self) -> list[int]:
        cnt = [0] * len(self.terminals)
        for p in self.pieces:
            for t in p.terminals:
                cnt[t] += 1
        for r in self.runs:
            for t in r.ends:
                cnt[t] += 1
        return cnt

    def factor_graph(self, tables: CostTables, groups=None) -> FactorGraph:
        fg = FactorGraph()
        for t in self.terminals:
            fg.add_var(t.label)
        for p in self.pieces:
            if groups is None or p.group in groups:
                fg.add_factor(p.terminals, tables.tables[p.kind], p.label)
        for r in self.runs:
            if groups is None or r.group in groups:
                fg.add_factor(r.ends, r.plan.factor(tables), r.label)
        return fg

    def groups(self) -> list[str]:
        seen = []
        for g in [p.group for p in self.pieces] + [r.group for r in self.runs]:
            if g not in seen:
                seen.append(g)
        return seen

    def count(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for p in self.pieces:
            out[p.kind] = out.get(p.kind, 0) + 1
        for r in self.runs:
            for k, c in r.plan.counts().items():
                out[k] = out.get(k, 0) + c
        return dict(sorted(out.items()))


def _box(center: Point, side: int) -> tuple[Point, Point]:
    h = side // 2
    return Point(center.x - h, center.y - h), Point(center.x + h, center.y + h)


def _add_loop(g: GadgetGraph, name: str, group: str, center: Point, slots: list[str],
              ports: list[Point | None]) -> Loop:
    """Four connection pieces and four thick bends around a square; 8 large terminals."""
    h = g.mode.loop // 2
    q = h // 2
    corners = [Point(-q, -h), Point(q, -h), Point(h, -q), Point(h, q),
               Point(q, h), Point(-q, h), Point(-h, q), Point(-h, -q)]
    large = [g.add_terminal("large", center + c, f"{name}.T{k}") for k, c in enumerate(corners)]
    loop = Loop(name, group, large, [])
    for k in range(4):
        a, b = large[2 * k], large[2 * k + 1]
        kind = slots[k]
        if kind == "C0":
            g.pieces.append(PieceInst("C0", (a, b), group, f"{name}.slot{k}"))
            loop.slots.append((kind, None))
        else:
            s = g.add_terminal("small", ports[k], f"{name}.slot{k}.small")
            g.pieces.append(PieceInst(kind, (a, b, s), group, f"{name}.slot{k}"))
            loop.slots.append((kind, s))
        g.pieces.append(PieceInst("thick-left-bend", (b, large[(2 * k + 2) % 8]), group, f"{name}.bend{k}"))
    g.loops[name] = loop
    lo, hi = _box(center, g.mode.loop)
    g.boxes[name] = Box(name, lo, hi, group)
    return loop


def _schematic_run(g, a, b, group, label, length):
    plan = straight_connection(length, g.terminals[a].pos, 0, mini=not g.mode.proof_grade)
    g.runs.append(Run(plan, (a, b), group, label))


def build_network(formula, embedding: RectilinearEmbedding | None = None, mode: ModeSpec | str = PROOF) -> GadgetGraph:
    """Variable chains, clause gadgets and ENTRY links laid over the embedding.

    Slot columns of the embedding get one bit loop each; a clause's left,
    middle and right legs feed alpha, beta and gamma.
    """
    mode = MODES[mode] if isinstance(mode, str) else mode
    g = GadgetGraph(mode)
    g.variables = list(formula.variables)
    g.clauses = [tuple(c) for c in formula.clauses]
    if not g.clauses and not g.variables:
        return g
    if embedding is None:
        embedding = embed_layout(list(formula.variables), [tuple(c) for c in formula.clauses])
    rep = validate_embedding(embedding, [tuple(c) for c in formula.clauses])
    if not rep.ok:
        raise LayoutConflict("invalid embedding: " + "; ".join(rep.failures[:3]))
    U = mode.unit
    lh = mode.loop // 2
    ch = mode.clause // 2
    legs = {(leg.clause, leg.var): leg for leg in embedding.legs}
    # ---- variable chains: one loop per slot column
    exit_small: dict[tuple[int, str], int] = {}
    exit_box: dict[tuple[int, str], str] = {}
    for v in g.variables:
        x0, x1, _ = embedding.variables[v]
        mine = sorted((leg.path[0][0], leg) for leg in embedding.legs if leg.var == v)
        cols = [x for x, _ in mine] or [x0]
        names = []
        group = f"var:{v}"
        for i, x in enumerate(cols):
            leg = mine[i][1] if mine else None
            side = None if leg is None else (UP if embedding.clause_vertices[leg.clause][1] > 0 else -UP)
            c = Point(x * U, 0)
            slots = ["C'" if i > 0 else "C0", "C" if i < len(cols) - 1 else "C0",
                     "C'" if side == UP else "C0", "C'" if side == -UP else "C0"]
            ports = [c + Point(-lh, 0), c + Point(lh, 0), c + Point(0, lh), c + Point(0, -lh)]
            name = f"{v}#{i}"
            loop = _add_loop(g, name, group, c, slots, ports)
            names.append(name)
            if leg is not None:
                k = 2 if side == UP else 3
                exit_small[(leg.clause, v)] = loop.slots[k][1]
                exit_box[(leg.clause, v)] = name
        g.chains[v] = names
        for a, b in zip(names, names[1:]):
            sa, sb = g.loops[a].slots[1][1], g.loops[b].slots[0][1]
            path = [g.terminals[sa].pos, g.terminals[sb].pos]
            _add_corridor_run(g, path, sa, sb, group, f"{a}->{b}", (a, b))
    # ---- clause gadgets
    for ci, cl in enumerate(g.clauses):
        vx, vy = embedding.clause_vertices[ci]
        side = UP if vy > 0 else -UP
        center = Point(vx * U, vy * U)
        group = f"clause:{ci}"
        lo, hi = _box(center, mode.clause)
        g.boxes[group] = Box(group, lo, hi, group)
        order = sorted(cl, key=lambda v: legs[(ci, v)].path[0][0])
        roles = dict(zip(("alpha", "beta", "gamma"), order))
        g.clause_roles.append(roles)
        ports = {order[0]: center + Point(-ch, 0), order[2]: center + Point(ch, 0),
                 order[1]: center + Point(0, -side * ch)}
        _add_clause(g, ci, center, group, order, ports, legs, exit_small, exit_box, side)
    return g


def _add_corridor_run(g, path, a, b, group, label, boxes):
    plan = route_corridor(path, g.mode)
    g.corridors.append(Corridor(label, [Point(*p) for p in path], boxes))
    g.runs.append(Run(plan, (a, b), group, label, len(g.corridors) - 1))


def _add_clause(g, ci, center, group, order, ports, legs, exit_small, exit_box, side):
    """Three loop pairs, DOWN/C0 links with adapters, the cyclic DOWN->UP ring, ENTRY links.

    Loops and internal links are schematic: they live inside the clause box.
    """
    mode = g.mode
    inner = mode.loop
    hats = {}
    downs = {}
    for k, role in enumerate(("alpha", "beta", "gamma")):
        base = center + Point((k - 1) * 2 * inner, 0)
        a = _add_loop(g, f"c{ci}.{role}", group, base + Point(0, -inner),
                      ["C", "C", "C", "C0"], [base + Point(0, -inner // 2)] * 3 + [None])
        ah = _add_loop(g, f"c{ci}.{role}^", group, base + Point(0, inner),
                       ["C'", "C'", "C'", "C0"], [base + Point(0, inner // 2)] * 3 + [None])
        # the loop boxes sit inside the clause box; only the clause box takes part in clearance
        del g.boxes[a.name], g.boxes[ah.name]
        hats[role] = ah
        for link, mid in ((0, "C"), (1, "C0")):
            s_in = g.add_terminal("small", base, f"c{ci}.{role}.link{link}.in")
            big_a = g.add_terminal("large", base, f"c{ci}.{role}.link{link}.A")
            big_b = g.add_terminal("large", base, f"c{ci}.{role}.link{link}.B")
            s_out = g.add_terminal("small", base, f"c{ci}.{role}.link{link}.out")
            _schematic_run(g, a.slots[link][1], s_in, group, f"c{ci}.{role}.link{link}.run0", mode.internal)
            g.pieces.append(PieceInst("thickening", (s_in, big_a), group, f"c{ci}.{role}.link{link}.thick"))
            if mid == "C":
                d = g.add_terminal("small", base, f"c{ci}.{role}.DOWN.small")
                g.pieces.append(PieceInst("C", (big_a, big_b, d), group, f"c{ci}.{role}.DOWN"))
                downs[role] = d
            else:
                g.pieces.append(PieceInst("C0", (big_a, big_b), group, f"c{ci}.{role}.C0"))
            g.pieces.append(PieceInst("thinning", (big_b, s_out), group, f"c{ci}.{role}.link{link}.thin"))
            _schematic_run(g, s_out, ah.slots[link][1], group, f"c{ci}.{role}.link{link}.run1", mode.internal)
        # ENTRY: C in slot 2 of the un-hatted loop, corridor along the leg to the variable's exit
        v = order[k]
        leg = legs[(ci, v)]
        U = mode.unit
        lh = mode.loop // 2
        pts = [Point(x * U, y * U) for x, y in leg.path]
        pts[0] = Point(pts[0].x, side * lh)
        pts[-1] = ports[v]
        g.terminals[a.slots[2][1]].pos = ports[v]
        _add_corridor_run(g, [pts[-1]] + pts[-2:0:-1] + [pts[0]] if len(pts) > 2 else [pts[-1], pts[0]],
                          a.slots[2][1], exit_small[(ci, v)], f"var:{v}", f"c{ci}.{role}.ENTRY",
                          (group, exit_box[(ci, v)]))
    ring = (("alpha", "beta"), ("beta", "gamma"), ("gamma", "alpha"))
    for src, dst in ring:
        _schematic_run(g, downs[src], hats[dst].slots[2][1], group, f"c{ci}.{src}.DOWN->{dst}^.UP", mode.internal)


# ------------------------------------------------------------------ emission

@dataclass
class StateSummary:
    satisfiable: bool
    per_assignment: dict[str, int]
    sat_min: int | None
    unsat_min: int | None
    global_min: int


@dataclass
class ReductionOutput:
    mode: str
    proof_grade: bool
    points: list[Point]
    boundary_edges: list[tuple[Point, Point]]
    target: tuple[int, int]               # symbolic target weight interval, 1e-9 units
    threshold: int
    gap: int
    attribution: dict[str, int]
    states: StateSummary
    counts: dict[str, int]
    deferred: list[str]
    placed: list = field(default_factory=list)     # (kind, Piece) instantiated with coordinates

    def sidecar(self, audit=None) -> dict:
        s = self.states
        out = {
            "mode": self.mode,
            "proof_grade": self.proof_grade,
            "units": "relative reduced cost, 1e-9",
            "target_weight": [fmt_cost(self.target[0]), fmt_cost(self.target[1])],
            "threshold": fmt_cost(self.threshold),
            "gap": fmt_cost(self.gap),
            "attribution": {k: fmt_cost(v) for k, v in self.attribution.items()},
            "state_enumeration": {
                "satisfiable": s.satisfiable,
                "assignments": {k: fmt_cost(v) for k, v in s.per_assignment.items()},
                "satisfying_min": None if s.sat_min is None else fmt_cost(s.sat_min),
                "violating_min": None if s.unsat_min is None else fmt_cost(s.unsat_min),
                "global_min": fmt_cost(s.global_min),
                "separation": None if s.sat_min is None or s.unsat_min is None
                else fmt_cost(s.unsat_min - s.sat_min),
            },
            "points": len(self.points),
            "boundary_edges": len(self.boundary_edges),
            "pieces": self.counts,
            "deferred": self.deferred,
        }
        if audit is not None:
            out["audit"] = {"ok": audit.ok, "failures": audit.failures, "notes": audit.notes}
        return out


def _one_in_three(clauses, truth: dict[str, bool]) -> bool:
    return all(sum(truth[v] for v in c) == 1 for c in clauses)


def emit_reduction(g: GadgetGraph, tables: CostTables | None = None, catalog=None,
                   max_enumerated_vars: int = 16) -> ReductionOutput:
    """Target weight from isolated gadget minima, threshold, and the state enumeration.

    ``catalog`` (a PieceCatalog) supplies coordinates for wire pieces; in
    proof mode they are counted but not instantiated.
    """
    tables = tables or CostTables.from_paper()
    attribution = {}
    for grp in g.groups():
        fg = g.factor_graph(tables, {grp})
        attribution[grp] = fg.minimize()[0]
    w = sum(attribution.values())
    fg = g.factor_graph(tables)
    glob = fg.minimize()[0]
    per = {}
    sat_min = unsat_min = None
    satisfiable = False
    if len(g.variables) > max_enumerated_vars:
        raise LayoutError(f"{len(g.variables)} variables exceed the enumeration limit {max_enumerated_vars}")
    for bits in itertools.product((True, False), repeat=len(g.variables)):
        truth = dict(zip(g.variables, bits))
        fixed = {}
        for v in g.variables:
            for name in g.chains[v]:
                for t in g.loops[name].large:
                    fixed[t] = L if truth[v] else R
        cost = fg.minimize(fixed)[0]
        key = "".join("1" if b else "0" for b in bits)
        per[key] = cost
        if _one_in_three(g.clauses, truth):
            satisfiable = True
            sat_min = cost if sat_min is None else min(sat_min, cost)
        else:
            unsat_min = cost if unsat_min is None else min(unsat_min, cost)
    states = StateSummary(satisfiable, per, sat_min, unsat_min, glob)
    points, edges, placed, deferred = _instantiate(g, catalog)
    lo, hi = w, w + _table_width(tables)
    if 2 * (hi - lo) >= DELTA4:
        raise AmbiguousWeight(f"target weight known only to {fmt_cost(hi - lo)}, threshold gap {fmt_cost(DELTA4)}")
    return ReductionOutput(g.mode.name, g.mode.proof_grade, points, edges, (lo, hi), w + DELTA4 // 2,
                           DELTA4, attribution, states, g.count(), deferred, placed)


def _table_width(tables: CostTables) -> int:
    # tables hold exact integers; analysed tables carry the rounding width per entry
    return int(getattr(tables, "width", 0))


def _instantiate(g: GadgetGraph, catalog):
    from .pieces import COORD_SCALE, Piece, TerminalTriangle

    counts = g.count()
    have = {} if catalog is None else {p.name: p for p in catalog}
    deferred = [f"{k}: {c} pieces without coordinates (box only)" for k, c in counts.items() if k not in have]
    deferred.append("pockets and holes between corridors: not triangulated (absolute weight not computed)")
    if g.mode.proof_grade or not have:
        if have:
            n = sum(len(have[k].cycle()) * c for k, c in counts.items() if k in have)
            deferred.append(f"proof mode: {n} wire-piece points counted, not instantiated")
        return [], [], [], deferred
    f = 10 ** (COORD_SCALE - 2)
    pts: dict[Point, None] = {}
    edges = []
    placed = []
    schematic = [r for r in g.runs if r.corridor is None]
    if schematic:
        deferred.append(f"{len(schematic)} links inside clause boxes: schematic, no coordinates")
    for r in g.runs:
        if r.corridor is None:
            continue
        for kind, start, direction, _ in r.plan.pieces():
            src = have.get(kind)
            if src is None:
                continue
            a0 = src.terminals[0].apex
            origin = Point(start.x * f, start.y * f)

            def tf(p, a0=a0, origin=origin, direction=direction):
                return origin + (p - a0).rotated(direction)

            cyc = [tf(p) for p in src.cycle()]
            terms = [TerminalTriangle(tf(t.apex), t.size, (t.axis + direction) % 4, t.area_state)
                     for t in src.terminals]
            pc = Piece(f"{r.label}.{kind}{len(placed)}", [("boundary", cyc)], terms)
            placed.append((kind, pc))
            for p in cyc:
                pts.setdefault(p, None)
            edges.extend(pc.boundary_edges())
    return list(pts), edges, placed, deferred


# ------------------------------------------------------------------ audit

def _seg_box(a: Point, b: Point):
    return min(a.x, b.x), min(a.y, b.y), max(a.x, b.x), max(a.y, b.y)


def _box_dist2(p, q) -> int:
    dx = max(0, p[0] - q[2], q[0] - p[2])
    dy = max(0, p[1] - q[3], q[1] - p[3])
    return dx * dx + dy * dy


def audit_layout(g: GadgetGraph, out: ReductionOutput | None = None, *, beta: str | None = None) -> ValidationReport:
    """Terminal bookkeeping, plan sums, corridor clearance and (with points) local beta checks."""
    rep = ValidationReport()
    for t, c in enumerate(g.incidence()):
        if c != 2:
            rep.fail(f"terminal {g.terminals[t].label}: {c} incident pieces, expected 2")
    for r in g.runs:
        if r.plan.total_span() != r.plan.length:
            rep.fail(f"run {r.label}: plan spans {r.plan.total_span()} of {r.plan.length}")
        if r.plan.proof_grade != g.mode.proof_grade:
            rep.fail(f"run {r.label}: plan grade does not match the mode")
        if r.corridor is not None:
            c = g.corridors[r.corridor]
            ends = {r.plan.start, r.plan.end}
            if ends != {c.path[0], c.path[-1]}:
                rep.fail(f"run {r.label}: plan does not join its corridor ends")
    w = g.mode.width
    segs = []
    for ci, c in enumerate(g.corridors):
        for a, b in zip(c.path, c.path[1:]):
            segs.append((ci, _seg_box(a, b)))
    for (i, s), (j, t) in itertools.combinations(segs, 2):
        if i != j and _box_dist2(s, t) < w * w:
            rep.fail(f"clearance: corridors {g.corridors[i].name} and {g.corridors[j].name} closer than {w}")
    for ci, s in segs:
        own = g.corridors[ci].boxes
        for name, bx in g.boxes.items():
            if name in own:
                continue
            box = (bx.lo.x, bx.lo.y, bx.hi.x, bx.hi.y)
            if _box_dist2(s, box) < (w // 2) ** 2:
                rep.fail(f"clearance: corridor {g.corridors[ci].name} runs into box {name}")
    for a, b in itertools.combinations(g.boxes.values(), 2):
        if _box_dist2((a.lo.x, a.lo.y, a.hi.x, a.hi.y), (b.lo.x, b.lo.y, b.hi.x, b.hi.y)) < w * w:
            rep.fail(f"clearance: boxes {a.name} and {b.name} overlap")
    rep.note(f"{len(g.terminals)} terminals, {len(g.pieces)} gadget pieces, {len(g.runs)} runs, "
             f"{len(g.corridors)} corridors")
    if out is not None and out.points:
        _audit_beta(rep, out, beta)
    elif out is not None:
        rep.note("structural checks only: no instantiated points")
    return rep


def _audit_beta(rep, out: ReductionOutput, beta):
    from .skeleton import PIECE_BETA, _as_threshold, edge_passes, min_beta

    thr = _as_threshold(beta or PIECE_BETA)
    pts = out.points
    # bucket grid sized to the longest boundary edge
    longest = max(max(abs(a.x - b.x), abs(a.y - b.y)) for a, b in out.boundary_edges)
    cell = max(1, 2 * longest)
    grid: dict[tuple[int, int], list[Point]] = {}
    for p in pts:
        grid.setdefault((p.x // cell, p.y // cell), []).append(p)
    bad = 0
    seen = set()
    for a, b in out.boundary_edges:
        key = (min(a, b), max(a, b))
        if key in seen:
            continue
        seen.add(key)
        cx, cy = (a.x + b.x) // 2 // cell, (a.y + b.y) // 2 // cell
        near = [p for dx in (-1, 0, 1) for dy in (-1, 0, 1) for p in grid.get((cx + dx, cy + dy), [])]
        if not edge_passes(min_beta(a, b, near), thr):
            bad += 1
            rep.fail(f"beta: boundary edge {a} -- {b} not certified at {thr}")
    rep.note(f"{len(seen)} boundary edges certified locally at beta {thr} ({bad} failures)")
