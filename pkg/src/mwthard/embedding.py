"""Rectilinear embeddings of variable-clause graphs.

Variables are horizontal segments on the line ``y = 0``; every clause is a
vertex above or below the line, reached from each of its variables by an
axis-parallel lattice path (a *leg*).  Layouts are produced from a variable
order plus a side for every clause: clauses on one side must form a laminar
family, each nested clause sitting inside one half of its host.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .geometry import ValidationReport

UP, DOWN = 1, -1


class InvalidEmbedding(ValueError):
    pass


@dataclass
class Leg:
    clause: int
    var: str
    path: list[tuple[int, int]]


@dataclass
class RectilinearEmbedding:
    variables: dict[str, tuple[int, int, int]]  # name -> (x_start, x_end, y)
    clause_vertices: list[tuple[int, int]]
    legs: list[Leg] = field(default_factory=list)

    def clause_side(self, ci: int) -> int:
        return UP if self.clause_vertices[ci][1] > 0 else DOWN

    def legs_of(self, ci: int) -> list[Leg]:
        return [leg for leg in self.legs if leg.clause == ci]

    def variable_order(self) -> list[str]:
        return sorted(self.variables, key=lambda v: self.variables[v][0])


def _lattice_points(path):
    """All lattice points on an axis-parallel path; None if a segment is diagonal."""
    pts = []
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if x0 != x1 and y0 != y1:
            return None
        dx = (x1 > x0) - (x1 < x0)
        dy = (y1 > y0) - (y1 < y0)
        x, y = x0, y0
        while (x, y) != (x1, y1):
            pts.append((x, y))
            x += dx
            y += dy
    pts.append(tuple(path[-1]))
    return pts


def validate_embedding(e: RectilinearEmbedding, clauses=None) -> ValidationReport:
    """Check line placement, rectilinear legs, disjointness and (optionally) incidences.

    ``clauses`` is a list of variable-name tuples; legs must match it exactly.
    """
    rep = ValidationReport()
    ys = {v[2] for v in e.variables.values()}
    if len(ys) > 1:
        rep.fail("variables: not collinear")
    line_y = ys.pop() if len(ys) == 1 else 0
    spans = sorted((x0, x1, name) for name, (x0, x1, _) in e.variables.items())
    for name, (x0, x1, _) in e.variables.items():
        if x0 > x1:
            rep.fail(f"variables: {name} has an empty segment")
    for (a0, a1, an), (b0, b1, bn) in zip(spans, spans[1:]):
        if b0 <= a1:
            rep.fail(f"variables: {an} and {bn} overlap")
    for ci, (cx, cy) in enumerate(e.clause_vertices):
        if cy == line_y:
            rep.fail(f"clause {ci}: vertex on the variable line")
    owner: dict[tuple[int, int], tuple[int, int]] = {}
    for li, leg in enumerate(e.legs):
        if len(leg.path) < 2:
            rep.fail(f"leg {li}: path too short")
            continue
        pts = _lattice_points(leg.path)
        if pts is None:
            rep.fail(f"leg {li}: diagonal segment, not rectilinear")
            continue
        if leg.var not in e.variables:
            rep.fail(f"leg {li}: unknown variable {leg.var}")
            continue
        x0, x1, vy = e.variables[leg.var]
        sx, sy = pts[0]
        if sy != vy or not (x0 <= sx <= x1):
            rep.fail(f"leg {li}: does not start on variable {leg.var}")
        if not (0 <= leg.clause < len(e.clause_vertices)) or pts[-1] != tuple(e.clause_vertices[leg.clause]):
            rep.fail(f"leg {li}: does not end at its clause vertex")
            continue
        if len(set(pts)) != len(pts):
            rep.fail(f"leg {li}: path revisits a point")
        for p in pts[1:]:
            if p[1] == line_y:
                rep.fail(f"leg {li}: returns to the variable line")
                break
        for p in pts:
            is_end = p == pts[-1]
            prev = owner.get(p)
            if prev is None:
                owner[p] = (li, leg.clause)
            elif not (is_end and prev[1] == leg.clause and p == tuple(e.clause_vertices[leg.clause])):
                rep.fail(f"legs {prev[0]} and {li}: share grid point {p}")
    # the clause vertex itself must not lie on a foreign leg
    if clauses is not None:
        want = {(ci, v) for ci, cl in enumerate(clauses) for v in cl}
        have = [(leg.clause, leg.var) for leg in e.legs]
        if len(set(have)) != len(have):
            rep.fail("incidence: duplicated leg")
        if set(have) != want:
            missing = sorted(want - set(have))
            extra = sorted(set(have) - want)
            rep.fail(f"incidence: missing {missing[:4]} extra {extra[:4]}")
        if len(clauses) != len(e.clause_vertices):
            rep.fail("incidence: clause count differs")
    return rep


# ------------------------------------------------------------------ layout

def _span(order_pos, clause):
    ps = sorted(order_pos[v] for v in clause)
    mid = ps[1] if len(ps) == 3 else None
    return ps[0], ps[-1], mid


def compatible(a, b) -> bool:
    """Can two clauses (given as (lo, hi, mid) position spans) share a side?"""
    (l1, r1, m1), (l2, r2, m2) = a, b
    if r1 <= l2 or r2 <= l1:
        if r1 == l2 == r2 or r2 == l1 == r1:
            return _inside_half(a, b) or _inside_half(b, a)
        return True
    return _inside_half(a, b) or _inside_half(b, a)


def _inside_half(outer, inner) -> bool:
    (l1, r1, m1), (l2, r2, _) = outer, inner
    if (l1, r1) == (l2, r2) and l1 != r1:
        # equal spans nest only inside a two-legged host
        return m1 is None
    if not (l1 <= l2 and r2 <= r1):
        return False
    if m1 is None:
        return True
    return r2 <= m1 or l2 >= m1


def assign_sides(order: list[str], clauses, fixed) -> list[int]:
    """Pick UP/DOWN for every clause so both sides are laminar.

    ``fixed[i]`` is UP, DOWN or None (free).  Raises InvalidEmbedding when no
    assignment exists.
    """
    pos = {v: i for i, v in enumerate(order)}
    spans = [_span(pos, c) for c in clauses]
    n = len(clauses)
    sides = list(fixed)
    # conflict graph, then 2-colouring seeded by the fixed clauses
    conflicts: dict[int, list[int]] = {i: [] for i in range(n)}
    by_lo = sorted(range(n), key=lambda i: spans[i][0])
    for a_idx, i in enumerate(by_lo):
        for j in by_lo[a_idx + 1:]:
            if spans[j][0] > spans[i][1]:
                break
            if not compatible(spans[i], spans[j]):
                if sides[i] is not None and sides[i] == sides[j]:
                    raise InvalidEmbedding(f"clauses {i} and {j} cannot share a side")
                conflicts[i].append(j)
                conflicts[j].append(i)
    q = deque(i for i in range(n) if sides[i] is not None)
    while True:
        while q:
            i = q.popleft()
            for j in conflicts[i]:
                want = -sides[i]
                if sides[j] is None:
                    sides[j] = want
                    q.append(j)
                elif sides[j] != want:
                    raise InvalidEmbedding(f"clauses {i} and {j} cannot be separated")
        rest = next((i for i in range(n) if sides[i] is None), None)
        if rest is None:
            break
        sides[rest] = UP
        q.append(rest)
    return sides


def build_embedding(order: list[str], clauses, sides) -> RectilinearEmbedding:
    """Lay out clauses (tuples of variable names) with given sides on the line ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    spans = [_span(pos, c) for c in clauses]
    for s in (UP, DOWN):
        idx = [i for i in range(len(clauses)) if sides[i] == s]
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                if not compatible(spans[idx[a]], spans[idx[b]]):
                    raise InvalidEmbedding(f"clauses {idx[a]} and {idx[b]} interleave")
    # slots per variable: per side, [ending][single/middle][starting]
    groups: dict[str, list] = {v: [] for v in order}
    for ci, cl in enumerate(clauses):
        lo, hi, mid = spans[ci]
        for v in cl:
            p = pos[v]
            if lo == hi:
                key = (1, 0, 0, ci)
            elif p == hi:
                # enclosing clauses (smaller lo) further right; on equal spans the
                # two-legged one encloses
                key = (0, -lo, -(mid is not None), -ci)
            elif p == lo:
                key = (2, -hi, mid is not None, ci)   # enclosing clauses further left
            else:
                key = (1, 1, 0, ci)
            groups[v].append((key, ci))
    slot: dict[tuple[int, str], int] = {}
    variables = {}
    x = 0
    for v in order:
        items = sorted(groups[v])
        start = x
        for _, ci in items:
            slot[(ci, v)] = x
            x += 1
        if not items:
            x += 1
        variables[v] = (start, x - 1, 0)
        x += 1
    # heights from geometric nesting
    heights = [0] * len(clauses)
    xs = [sorted(slot[(ci, v)] for v in cl) for ci, cl in enumerate(clauses)]
    for s in (UP, DOWN):
        idx = sorted((i for i in range(len(clauses)) if sides[i] == s), key=lambda i: xs[i][-1] - xs[i][0])
        for k, i in enumerate(idx):
            h = 1
            for j in idx[:k]:
                if xs[i][0] <= xs[j][0] and xs[j][-1] <= xs[i][-1] and j != i:
                    h = max(h, heights[j] + 1)
            heights[i] = h
    vertices = []
    legs = []
    for ci, cl in enumerate(clauses):
        s, h = sides[ci], heights[ci]
        cols = xs[ci]
        vx = cols[1] if len(cols) == 3 else cols[-1]
        vy = s * h
        vertices.append((vx, vy))
        for v in cl:
            sx = slot[(ci, v)]
            path = [(sx, 0), (sx, vy)]
            if sx != vx:
                path.append((vx, vy))
            legs.append(Leg(ci, v, path))
    return RectilinearEmbedding(variables, vertices, legs)


def layout(order, clauses, fixed=None) -> RectilinearEmbedding:
    fixed = fixed if fixed is not None else [None] * len(clauses)
    sides = assign_sides(order, clauses, fixed)
    return build_embedding(order, clauses, sides)


# ------------------------------------------------------------------ file format

def format_embedding(e: RectilinearEmbedding) -> list[str]:
    lines = []
    for name in e.variable_order():
        x0, x1, y = e.variables[name]
        lines.append(f"v {name} {x0} {x1} {y}")
    for ci, (x, y) in enumerate(e.clause_vertices):
        lines.append(f"k {ci} {x} {y}")
    for leg in e.legs:
        pts = " ".join(f"{x},{y}" for x, y in leg.path)
        lines.append(f"l {leg.clause} {leg.var} {pts}")
    return lines


def parse_embedding_lines(lines) -> RectilinearEmbedding:
    variables = {}
    vertices: dict[int, tuple[int, int]] = {}
    legs = []
    for ln in lines:
        tok = ln.split()
        if tok[0] == "v":
            variables[tok[1]] = (int(tok[2]), int(tok[3]), int(tok[4]))
        elif tok[0] == "k":
            vertices[int(tok[1])] = (int(tok[2]), int(tok[3]))
        elif tok[0] == "l":
            path = [tuple(int(c) for c in p.split(",")) for p in tok[3:]]
            legs.append(Leg(int(tok[1]), tok[2], path))
    verts = [vertices[i] for i in range(len(vertices))]
    return RectilinearEmbedding(variables, verts, legs)
