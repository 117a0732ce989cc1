"""Positive 1-in-3 formulas, planar 3-SAT instances and the transformation between them.

A 1-in-3 clause ``(a, b, c)`` holds when exactly one of its variables is
true.  The transformation turns a planar CNF with rectilinear embedding into
an equisatisfiable positive 1-in-3 formula that again carries a rectilinear
embedding.  The steps are

1. unit propagation, which removes one-literal clauses;
2. per-occurrence chain copies of every variable, joined by equality or
   inequality gadgets, so each copy carries a positive literal;
3. replacement of every remaining disjunction by 1-in-3 clauses: three
   literals use the block ``(x,u,a) (y,u,b) (a,b,q) (u=c) (d!=z) (c,d,r)``,
   two literals use ``(x!=a) (y!=b) (a,q,b)``.

The output layout is rebuilt from a variable order and a side for every
clause (see :mod:`mwthard.embedding`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .embedding import (DOWN, UP, InvalidEmbedding, RectilinearEmbedding, format_embedding,
                        layout, parse_embedding_lines, validate_embedding)

BRUTE_FORCE_VARS = 24


class TooLarge(ValueError):
    pass


class MalformedInstance(ValueError):
    pass


@dataclass
class Formula1in3:
    variables: tuple[str, ...]
    clauses: list[tuple[str, str, str]]

    def __post_init__(self):
        self.variables = tuple(self.variables)
        self.clauses = [tuple(c) for c in self.clauses]
        known = set(self.variables)
        if len(known) != len(self.variables):
            raise MalformedInstance("duplicate variable name")
        for c in self.clauses:
            if len(c) != 3 or len(set(c)) != 3:
                raise MalformedInstance(f"clause {c} needs three distinct variables")
            for v in c:
                if v not in known:
                    raise MalformedInstance(f"clause {c} uses undeclared {v}")
                if v.startswith(("~", "-", "¬")):
                    raise MalformedInstance("negations are not allowed")

    @classmethod
    def from_clauses(cls, clauses, extra=()) -> "Formula1in3":
        return cls(_first_seen(clauses, extra), clauses)


def _first_seen(clauses, extra=()):
    seen = dict.fromkeys(extra)
    for c in clauses:
        for v in c:
            seen.setdefault(v)
    return tuple(seen)


@dataclass
class SatResult:
    satisfiable: bool
    witness: dict[str, int] | None
    model_count: int | None


def _check_size(n):
    if n > BRUTE_FORCE_VARS:
        raise TooLarge(f"{n} variables exceeds the enumeration budget of {BRUTE_FORCE_VARS}")


def one_in_three_count(clauses, variables=None, fixed=None) -> SatResult:
    """Exhaustive count over all assignments; clauses are multisets of names.

    Repeated names count with multiplicity, so ``(x, a, x)`` forces ``x = 0``.
    """
    variables = tuple(variables) if variables is not None else _first_seen(clauses)
    fixed = dict(fixed or {})
    free = [v for v in variables if v not in fixed]
    _check_size(len(free))
    idx = {v: i for i, v in enumerate(free)}
    n = len(free)
    total = 1 << n
    chunk = 1 << 20
    count = 0
    witness_mask = None
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        ok = np.ones(len(masks), dtype=bool)
        for c in clauses:
            s = np.zeros(len(masks), dtype=np.int64)
            for v in c:
                if v in fixed:
                    s += int(fixed[v])
                else:
                    s += (masks >> idx[v]) & 1
            ok &= s == 1
        hits = np.flatnonzero(ok)
        count += len(hits)
        if witness_mask is None and len(hits):
            witness_mask = int(masks[hits[0]])
    if witness_mask is None:
        return SatResult(False, None, 0)
    w = {v: (witness_mask >> idx[v]) & 1 for v in free}
    w.update({v: int(b) for v, b in fixed.items()})
    return SatResult(True, {v: w[v] for v in variables if v in w}, count)


def brute_force_1in3(f: Formula1in3, fixed=None) -> SatResult:
    """Enumerate every assignment of ``f``; the witness is the first model in binary order
    (the first variable is the lowest bit)."""
    return one_in_three_count(f.clauses, f.variables, fixed)


def solve_1in3(clauses, variables=None) -> SatResult:
    """Complete backtracking search with exactly-one propagation (no model count).

    Used where a formula is too large for plain enumeration.
    """
    variables = tuple(variables) if variables is not None else _first_seen(clauses)
    occ: dict[str, list[int]] = {v: [] for v in variables}
    for ci, c in enumerate(clauses):
        for v in c:
            occ[v].append(ci)

    def propagate(assign, queue):
        while queue:
            v = queue.pop()
            for ci in occ[v]:
                c = clauses[ci]
                vals = [assign.get(u) for u in c]
                ones = sum(1 for x in vals if x == 1)
                if ones > 1:
                    return False
                unknown = [u for u, x in zip(c, vals) if x is None]
                if ones == 1:
                    for u in unknown:
                        assign[u] = 0
                        queue.append(u)
                elif not unknown:
                    return False
                elif len(unknown) == 1 or len(set(unknown)) == 1:
                    u = unknown[0]
                    if len(unknown) > 1:
                        return False  # a repeated variable would count twice
                    assign[u] = 1
                    queue.append(u)
        return True

    order = sorted(variables, key=lambda v: -len(occ[v]))

    def search(assign):
        for v in order:
            if v not in assign:
                break
        else:
            return assign
        for b in (1, 0):
            trial = dict(assign)
            trial[v] = b
            if propagate(trial, [v]):
                res = search(trial)
                if res is not None:
                    return res
        return None

    start = {}
    # clauses that are already decided by repetition
    queue = []
    for c in clauses:
        if len(set(c)) < len(c):
            for u in set(c):
                if c.count(u) > 1 and start.get(u) != 0:
                    start[u] = 0
                    queue.append(u)
    if not propagate(start, queue):
        return SatResult(False, None, None)
    res = search(start)
    if res is None:
        return SatResult(False, None, None)
    return SatResult(True, {v: res.get(v, 0) for v in variables}, None)


def check_1in3(clauses, assignment) -> bool:
    return all(sum(assignment[v] for v in c) == 1 for c in clauses)


# ------------------------------------------------------------------ CNF side

Literal = tuple[str, bool]


def parse_literal(text: str) -> Literal:
    for neg in ("~", "-", "¬"):
        if text.startswith(neg):
            return text[len(neg):], False
    return text, True


def literal_text(lit: Literal) -> str:
    return lit[0] if lit[1] else "~" + lit[0]


@dataclass
class Planar3SatInstance:
    variables: tuple[str, ...]
    clauses: list[tuple[Literal, ...]]
    embedding: RectilinearEmbedding

    def incidence(self) -> list[tuple[str, ...]]:
        return [tuple(v for v, _ in c) for c in self.clauses]


def brute_force_cnf(variables, clauses, fixed=None) -> SatResult:
    variables = tuple(variables)
    fixed = dict(fixed or {})
    free = [v for v in variables if v not in fixed]
    _check_size(len(free))
    count, witness = 0, None
    for bits in itertools.product((0, 1), repeat=len(free)):
        a = dict(zip(free, bits))
        a.update(fixed)
        if all(any(a[v] == (1 if pos else 0) for v, pos in c) for c in clauses):
            count += 1
            if witness is None:
                witness = a
    return SatResult(count > 0, witness, count)


# ------------------------------------------------------------------ gadgets

class FreshNamer:
    """Yields ``_0, _1, ...`` skipping names already in use."""

    def __init__(self, taken=(), prefix: str = "_"):
        self.taken = set(taken)
        self.prefix = prefix
        self.k = 0

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{self.k}"
            self.k += 1
            if name not in self.taken:
                self.taken.add(name)
                return name


@dataclass
class Gadget:
    """Clauses plus the left-to-right order of the variables strictly between the ends."""

    clauses: list[tuple[str, str, str]]
    inner: list[str]
    fresh: list[str] = field(default_factory=list)


def inequality_gadget(x: str, y: str, fresh) -> Gadget:
    a, b, c, d = fresh(), fresh(), fresh(), fresh()
    return Gadget([(x, a, y), (a, b, c), (a, c, d), (b, c, d)], [a, b, c, d], [a, b, c, d])


def equality_gadget(x: str, y: str, fresh) -> Gadget:
    m = fresh()
    g1 = inequality_gadget(x, m, fresh)
    g2 = inequality_gadget(m, y, fresh)
    return Gadget(g1.clauses + g2.clauses, g1.inner + [m] + g2.inner, [m] + g1.fresh + g2.fresh)


def build_gadget(kind: str, x: str, y: str, fresh) -> Gadget:
    if kind == "inequality":
        return inequality_gadget(x, y, fresh)
    if kind == "equality":
        return equality_gadget(x, y, fresh)
    raise ValueError(f"unknown gadget kind {kind!r}")


def gadget_embedding(g: Gadget, x: str, y: str) -> RectilinearEmbedding:
    order = [x] + g.inner + ([y] if y != x else [])
    return layout(order, g.clauses)


def disjunction_block(x: str, y: str, z: str, fresh) -> dict:
    """``x or y or z`` as positive 1-in-3 clauses, with named parts for layout."""
    u, a, b, q, c, d, r = (fresh() for _ in range(7))
    eq = equality_gadget(u, c, fresh)
    ne = inequality_gadget(d, z, fresh)
    core = [(x, u, a), (y, u, b), (a, b, q), (c, d, r)]
    return {"clauses": core + eq.clauses + ne.clauses, "core": core,
            "names": dict(u=u, a=a, b=b, q=q, c=c, d=d, r=r), "eq": eq, "ne": ne}


def projection(clauses, onto, fixed_vars=()) -> set[tuple[int, ...]]:
    """Assignments of ``onto`` that extend to a model, by full enumeration of the rest."""
    onto = tuple(onto)
    inner = [v for v in _first_seen(clauses) if v not in onto]
    out = set()
    for bits in itertools.product((0, 1), repeat=len(onto)):
        if one_in_three_count(clauses, tuple(onto) + tuple(inner), dict(zip(onto, bits))).satisfiable:
            out.add(bits)
    return out


# ------------------------------------------------------------------ transformation

@dataclass
class TransformResult:
    formula: Formula1in3
    embedding: RectilinearEmbedding
    unsat_by_propagation: bool = False
    notes: list[str] = field(default_factory=list)


def _unit_propagate(clauses):
    """Return (live clauses as index -> literal list, forced assignment) or None on conflict."""
    live = {i: list(c) for i, c in enumerate(clauses)}
    assign: dict[str, bool] = {}
    changed = True
    while changed:
        changed = False
        for i in list(live):
            c = [lit for lit in live[i] if lit[0] not in assign or assign[lit[0]] == lit[1]]
            if any(lit[0] in assign for lit in c):
                del live[i]
                changed = True
                continue
            live[i] = c
            if not c:
                return None
            if len(c) == 1:
                v, pos = c[0]
                assign[v] = pos
                del live[i]
                changed = True
    return live, assign


def _canonical_unsat(fresh) -> TransformResult:
    a, b, c, d = (fresh() for _ in range(4))
    clauses = [(a, b, c), (a, b, d), (a, c, d), (b, c, d)]
    emb = layout([a, b, c, d], clauses)
    return TransformResult(Formula1in3((a, b, c, d), clauses), emb, True)


def transform_instance(inst: Planar3SatInstance) -> TransformResult:
    rep = validate_embedding(inst.embedding, inst.incidence())
    if not rep.ok:
        raise InvalidEmbedding("; ".join(rep.failures))
    for c in inst.clauses:
        if not 1 <= len(c) <= 3 or len({v for v, _ in c}) != len(c):
            raise MalformedInstance(f"clause {c} must have 1-3 distinct variables")
    emb = inst.embedding
    fresh = FreshNamer(inst.variables)
    order = emb.variable_order()
    missing = [v for v in inst.variables if v not in emb.variables]
    if missing:
        raise InvalidEmbedding(f"variables without placement: {missing}")
    pos = {v: i for i, v in enumerate(order)}
    side = {ci: emb.clause_side(ci) for ci in range(len(inst.clauses))}

    prop = _unit_propagate(inst.clauses)
    if prop is None:
        return _canonical_unsat(fresh)
    live, _ = prop
    if not live:
        return TransformResult(Formula1in3((), []), RectilinearEmbedding({}, [], []))

    # legs per variable, ordered so that left-inserting copies precede right-inserting ones
    legs: dict[str, list] = {v: [] for v in order}
    for ci, lits in live.items():
        ps = sorted(pos[v] for v, _ in lits)
        lo, hi = ps[0], ps[-1]
        for v, positive in lits:
            p = pos[v]
            s = side[ci]
            three = len(lits) == 3
            # same tie-breaks as the layout builder: equal spans nest consistently
            if p == hi:
                key = (0 if s == UP else 1, -lo, -three, -ci)
                direction = "L"
            elif p == lo:
                key = (5 if s == UP else 4, -hi, three, ci)
                direction = "R"
            else:
                key = (2 if s == UP else 3, 0, 0, ci)
                direction = "L"
            legs[v].append((key, ci, positive, direction))

    copy_of: dict[tuple[int, str], str] = {}
    chains = {}
    for v in order:
        items = sorted(legs[v], key=lambda t: t[0])
        chains[v] = items
        for _, ci, _, _ in items:
            copy_of[(ci, v)] = fresh()

    clauses: list[tuple[str, str, str]] = []
    fixed: list = []
    left_ins: dict[str, list[str]] = {}
    right_ins: dict[str, list[str]] = {}

    def add(cl, s=None):
        clauses.append(tuple(cl))
        fixed.append(s)

    def add_gadget(g: Gadget):
        for cl in g.clauses:
            add(cl)

    # disjunctions
    for ci, lits in sorted(live.items()):
        s = side[ci]
        vs = sorted((v for v, _ in lits), key=lambda v: pos[v])
        cp = [copy_of[(ci, v)] for v in vs]
        if len(cp) == 2:
            x, y = cp
            a, b, q = fresh(), fresh(), fresh()
            g1 = inequality_gadget(x, a, fresh)
            g2 = inequality_gadget(b, y, fresh)
            add_gadget(g1)
            add_gadget(g2)
            add((a, q, b), s)
            right_ins[x] = g1.inner + [a, q]
            left_ins[y] = [b] + g2.inner
        else:
            x, y, z = cp
            blk = disjunction_block(x, y, z, fresh)
            n = blk["names"]
            eq, ne = blk["eq"], blk["ne"]
            # eq = (u != m) + (m != c); its second main clause is the long one
            m = eq.fresh[0]
            ne1, ne2 = eq.inner[:4], eq.inner[5:]
            add((x, n["u"], n["a"]))
            add((y, n["u"], n["b"]), s)
            add((n["a"], n["b"], n["q"]), s)
            add((n["c"], n["d"], n["r"]))
            first, second = eq.clauses[:4], eq.clauses[4:]
            for cl in first:
                add(cl)
            add(second[0], s)
            for cl in second[1:]:
                add(cl)
            add_gadget(ne)
            right_ins[x] = [m] + ne2 + ne1 + [n["u"], n["a"], n["q"]]
            left_ins[y] = [n["b"]]
            left_ins[z] = [n["c"], n["r"], n["d"]] + ne.inner

    # chains
    line: list[str] = []
    for v in order:
        items = chains[v]
        for k, (_, ci, positive, _) in enumerate(items):
            c = copy_of[(ci, v)]
            line.extend(left_ins.get(c, []))
            line.append(c)
            line.extend(right_ins.get(c, []))
            if k + 1 < len(items):
                nxt_ci, nxt_pos = items[k + 1][1], items[k + 1][2]
                nxt = copy_of[(nxt_ci, v)]
                kind = "equality" if positive == nxt_pos else "inequality"
                g = build_gadget(kind, c, nxt, fresh)
                add_gadget(g)
                line.extend(g.inner)
    try:
        out_emb = layout(line, clauses, fixed)
    except InvalidEmbedding as exc:
        raise InvalidEmbedding(f"layout of transformed instance failed: {exc}") from exc
    formula = Formula1in3(tuple(line), clauses)
    return TransformResult(formula, out_emb)


# ------------------------------------------------------------------ random instances

def random_planar_instance(rng, n_vars: int, n_clauses: int, max_len: int = 3) -> Planar3SatInstance:
    """Random CNF whose clauses are laminar on the line ``x1 .. xn``, embedded rectilinearly."""
    from .embedding import _span, build_embedding, compatible

    names = [f"x{i + 1}" for i in range(n_vars)]
    pos = {v: i for i, v in enumerate(names)}
    chosen, sides = [], []
    tries = 0
    while len(chosen) < n_clauses and tries < 500:
        tries += 1
        k = rng.randint(1, min(max_len, n_vars))
        vs = sorted(rng.sample(names, k), key=pos.get)
        sp = _span(pos, vs)
        for s in rng.sample([UP, DOWN], 2):
            if all(compatible(sp, _span(pos, c)) for c, t in zip(chosen, sides) if t == s):
                chosen.append(vs)
                sides.append(s)
                break
    clauses = [tuple((v, rng.random() < 0.5) for v in c) for c in chosen]
    emb = build_embedding(names, [tuple(c) for c in chosen], sides)
    return Planar3SatInstance(tuple(names), clauses, emb)


# ------------------------------------------------------------------ instance files

def format_instance(obj, embedding: RectilinearEmbedding | None = None) -> str:
    if isinstance(obj, Planar3SatInstance):
        head = [f"p cnf3 {len(obj.variables)} {len(obj.clauses)}", "x " + " ".join(obj.variables)]
        body = ["t " + " ".join(literal_text(lit) for lit in c) for c in obj.clauses]
        emb = obj.embedding
    else:
        head = [f"p 1in3 {len(obj.variables)} {len(obj.clauses)}", "x " + " ".join(obj.variables)]
        body = ["t " + " ".join(c) for c in obj.clauses]
        emb = embedding
    lines = head + body + (format_embedding(emb) if emb is not None else [])
    return "\n".join(lines) + "\n"


def parse_instance(text: str):
    """Inverse of :func:`format_instance`: an instance, or ``(formula, embedding)``."""
    kind = None
    variables: list[str] = []
    clauses = []
    emb_lines = []
    declared = None
    for no, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        tok = ln.split()
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] not in ("cnf3", "1in3"):
                raise MalformedInstance(f"line {no}: bad header")
            kind, declared = tok[1], (int(tok[2]), int(tok[3]))
        elif tok[0] == "x":
            variables.extend(tok[1:])
        elif tok[0] == "t":
            if kind is None:
                raise MalformedInstance(f"line {no}: clause before header")
            if kind == "cnf3":
                clauses.append(tuple(parse_literal(t) for t in tok[1:]))
            else:
                clauses.append(tuple(tok[1:]))
        elif tok[0] in ("v", "k", "l"):
            emb_lines.append(ln)
        else:
            raise MalformedInstance(f"line {no}: unknown record {tok[0]!r}")
    if kind is None:
        raise MalformedInstance("missing header")
    if declared != (len(variables), len(clauses)):
        raise MalformedInstance(f"header declares {declared}, found {(len(variables), len(clauses))}")
    emb = parse_embedding_lines(emb_lines)
    if kind == "cnf3":
        if clauses and not emb_lines:
            raise MalformedInstance("a planar instance needs an embedding")
        return Planar3SatInstance(tuple(variables), clauses, emb)
    return Formula1in3(tuple(variables), clauses), emb
