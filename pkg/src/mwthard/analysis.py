"""Pattern tables for pieces and the terminal-edge check on W."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arithmetic import IntInterval, Ordering, ScaledInt, WORK_SCALE, interval_compare
from .pieces import Piece, WInstance
from .polygon_mwt import EdgeConstraint, MwtError, NO_CONSTRAINT, solve_many

SIGMA = ScaledInt(4, 2)          # perturbation bound per coordinate
E_MAX_DEFAULT = 18               # internal edges of the largest case polygon


class AmbiguousOptimum(ArithmeticError):
    pass


class LemmaFails(AssertionError):
    def __init__(self, case, msg):
        super().__init__(f"case v{case[0]}, v{case[1]}': {msg}")
        self.case = case


@dataclass
class PatternRow:
    pattern: str
    multiplicity: int
    cost: IntInterval
    reduced: IntInterval
    relative: IntInterval
    degenerate: bool
    included: list[bool]


@dataclass
class PatternTable:
    piece: str
    rows: list[PatternRow] = field(default_factory=list)

    def __getitem__(self, pattern: str) -> PatternRow:
        for r in self.rows:
            if r.pattern == pattern:
                return r
        raise KeyError(pattern)

    def patterns(self) -> list[str]:
        return [r.pattern for r in self.rows]

    def minima(self) -> list[str]:
        return [r.pattern for r in self.rows if r.relative == IntInterval.zero(r.relative.scale)]


def _delta_interval(d: ScaledInt, scale: int) -> IntInterval:
    return IntInterval.exact(d.rescale(scale).value, scale)


def reduced_cost(piece: Piece, pattern: str, cost: IntInterval) -> IntInterval:
    """Subtract delta where the pattern keeps the triangle area, add it otherwise."""
    out = cost
    for t, inc in zip(piece.terminals, piece.included(pattern)):
        d = _delta_interval(t.delta, cost.scale)
        out = out - d if inc else out + d
    return out


def relative_costs(reduced: dict[str, IntInterval]) -> dict[str, IntInterval]:
    """c-tilde against the minimum; identical enclosures count as equal."""
    keys = list(reduced)
    best = keys[0]
    for k in keys[1:]:
        r = reduced[k]
        if r == reduced[best]:
            continue
        o = interval_compare(r, reduced[best])
        if o is Ordering.OVERLAPPING:
            raise AmbiguousOptimum(f"patterns {k} and {best} cannot be ranked: {r} vs {reduced[best]}")
        if o is Ordering.LESS:
            best = k
    for k in keys:
        r = reduced[k]
        if r != reduced[best] and interval_compare(r, reduced[best]) is Ordering.OVERLAPPING:
            raise AmbiguousOptimum(f"patterns {k} and {best} cannot be ranked: {r} vs {reduced[best]}")
    out = {}
    for k in keys:
        r = reduced[k]
        out[k] = IntInterval.zero(r.scale) if r == reduced[best] else r - reduced[best]
    return out


def analyze_piece(piece: Piece, workers: int | None = None, scale: int = WORK_SCALE) -> PatternTable:
    """Close the piece for each of the 2^k terminal patterns and tabulate c, c-bar, c-tilde."""
    pats = piece.patterns()
    jobs = [(piece.pattern_polygon(p), NO_CONSTRAINT, scale) for p in pats]
    results = solve_many(jobs, workers)
    reduced = {}
    for p, r in zip(pats, results):
        if isinstance(r, Exception):
            raise r
        if r.candidates_degenerate:
            raise MwtError(f"{piece.name} pattern {p}: a degenerate triangulation may be optimal")
        reduced[p] = reduced_cost(piece, p, r.optimal_cost)
    rel = relative_costs(reduced)
    table = PatternTable(piece.name)
    for p, r in zip(pats, results):
        table.rows.append(PatternRow(p, r.multiplicity, r.optimal_cost, reduced[p], rel[p],
                                     r.candidates_degenerate, piece.included(p)))
    return table


# ------------------------------------------------------------------ W lemma

@dataclass
class LemmaCase:
    i: int
    j: int
    unrestricted: IntInterval
    restricted: IntInterval
    multiplicity: int
    gap: ScaledInt            # lower bound on restricted minus unrestricted
    internal_edges: int


@dataclass
class LemmaReport:
    cases: list[LemmaCase]
    e_max: int
    sigma: ScaledInt

    @property
    def min_case(self) -> LemmaCase:
        return min(self.cases, key=lambda c: (c.gap, c.i, c.j))

    @property
    def min_gap(self) -> ScaledInt:
        return self.min_case.gap

    @property
    def margin(self) -> ScaledInt:
        """Largest possible weight change of one triangulation under the perturbation."""
        return self.sigma * (2 * self.e_max)

    @property
    def margin_ok(self) -> bool:
        return self.min_gap > self.margin * 2

    def log_lines(self) -> list[str]:
        out = []
        for c in self.cases:
            out.append(f"Case v{c.i}, v{c.j}': difference =")
            out.append(c.gap.format(5))
            out.append("          Best solution value without terminal edges:")
            out.append(f"              {_bracket(c.restricted, 5)}")
            out.append(f"          There is/are {c.multiplicity} best solution(s) without restriction:")
            out.extend(f"              {_bracket(c.unrestricted, 5)}" for _ in range(c.multiplicity))
        m = self.min_case
        out.append(f"smallest difference {m.gap.format(5)} at v{m.i}, v{m.j}'")
        verdict = "holds" if self.margin_ok else "FAILS"
        out.append(f"margin: {m.gap.format(5)} > 2*{self.margin.format(2)} {verdict}")
        return out


def _bracket(iv: IntInterval, digits: int) -> str:
    """Outward-rounded enclosure at ``digits`` places."""
    f = 10 ** (iv.scale - digits)
    lo, hi = iv.lo // f, -(-iv.hi // f)
    return f"[{ScaledInt(lo, digits).format(digits)},{ScaledInt(hi, digits).format(digits)}]"


def check_terminal_lemma(w: WInstance, workers: int | None = None, e_max: int | None = None,
                         sigma: ScaledInt = SIGMA, scale: int = WORK_SCALE) -> LemmaReport:
    """All 21 cases 1 <= i <= j <= 6: every candidate optimum must use xy or xz.

    A case passes when the optimum with both edges forbidden is certainly above
    the unrestricted upper bound, so no triangulation avoiding them can tie.
    """
    cases = [(i, j) for i in range(1, 7) for j in range(i, 7)]
    jobs = []
    meta = []
    for i, j in cases:
        poly, xi, yi, zi = w.case_polygon(i, j)
        jobs.append((poly, NO_CONSTRAINT, scale))
        jobs.append((poly, EdgeConstraint.of([(xi, yi), (xi, zi)]), scale))
        meta.append(len(poly) - 3)
    res = solve_many(jobs, workers)
    out = []
    for k, (i, j) in enumerate(cases):
        free, fixed = res[2 * k], res[2 * k + 1]
        for r in (free, fixed):
            if isinstance(r, Exception):
                raise LemmaFails((i, j), str(r))
        if free.candidates_degenerate:
            raise LemmaFails((i, j), "a degenerate triangulation may be optimal")
        gap = fixed.optimal_cost.lo - free.best_upper
        if gap <= 0:
            raise LemmaFails((i, j), "an optimum may avoid both xy and xz")
        out.append(LemmaCase(i, j, free.optimal_cost, fixed.optimal_cost, free.multiplicity,
                             _floor(gap, scale, 5),
                             meta[k]))
    if e_max is None:
        e_max = max([E_MAX_DEFAULT] + [c.internal_edges for c in out])
    return LemmaReport(out, e_max, sigma)


def _floor(v: int, scale: int, digits: int) -> ScaledInt:
    return ScaledInt(v // 10 ** (scale - digits), digits)
