"""Relative reduced costs of pieces and exact minimisation over terminal states.

Costs are integers in units of 1e-9 (the displayed precision of the piece
tables).  A network is a factor graph: every terminal triangle is a binary
variable (0 = L, 1 = R) and every piece contributes its c-tilde table over
the states of its terminals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .arithmetic import ScaledInt, parse_fixed_decimal

COST_SCALE = 9
L, R = 0, 1


def _c(text: str) -> int:
    return parse_fixed_decimal(text, COST_SCALE).value


# relative reduced costs of the paper's pieces, 9 displayed digits
EPS1 = _c("0.000051402")
EPS2 = _c("0.000001575")
DELTA1 = _c("0.003861076")
DELTA2 = _c("0.004630878")
DELTA3 = _c("0.01")
DELTA4 = _c("0.0007")

# two-terminal pieces: pattern order LL, LR, RL, RR
_TWO = {
    "wire": ("0", "0.210506663", "0.125593246", "0"),
    "extended-wire": ("0", "0.208397570", "0.122001310", "0"),
    "thickening": ("0.000051402", "0.018887246", "0.014627250", "0"),
    "thinning": ("0", "0.018887246", "0.014627250", "0.000051402"),
    "C0": ("0", "0.044001701", "0.020571757", "0"),
    "left-bend": ("0", "0.086460895", "0.125593246", "0"),
    "right-bend": ("0", "0.210506663", "0.125593246", "0"),
    "thick-left-bend": ("0", "0.891261046", "0.020571757", "0"),
}
# C-connection: large, large, small
_C = {"LLl": "0.003861076", "LLr": "0.000001575", "LRl": "0.029994716", "LRr": "0.026135215",
      "RLl": "0.020571757", "RLr": "0.020573332", "RRl": "0", "RRr": "0.004630878"}

# terminal sizes in declared order
SIZES = {k: ("small", "small") for k in ("wire", "extended-wire", "left-bend", "right-bend")}
SIZES.update({"thickening": ("small", "large"), "thinning": ("large", "small"),
              "C0": ("large", "large"), "thick-left-bend": ("large", "large"),
              "C": ("large", "large", "small"), "C'": ("large", "large", "small")})


def _swap(p: str) -> str:
    return p.translate(str.maketrans("LRlr", "RLrl"))


def mirror_pattern(p: str) -> str:
    """Pattern of the mirror image: large order reversed, every letter swapped."""
    return _swap(p[1] + p[0] + p[2:])


@dataclass
class CostTables:
    """c-tilde per piece kind, as an integer array indexed by terminal states."""

    tables: dict[str, np.ndarray] = field(default_factory=dict)
    source: str = "paper"

    @classmethod
    def from_paper(cls) -> "CostTables":
        t = {}
        for kind, vals in _TWO.items():
            t[kind] = np.array([[_c(vals[0]), _c(vals[1])], [_c(vals[2]), _c(vals[3])]], dtype=np.int64)
        c = np.zeros((2, 2, 2), dtype=np.int64)
        cp = np.zeros((2, 2, 2), dtype=np.int64)
        for p, v in _C.items():
            c[_idx(p)] = _c(v)
        for p in _C:
            cp[_idx(p)] = c[_idx(mirror_pattern(p))]
        t["C"], t["C'"] = c, cp
        return cls(t, "paper")

    @classmethod
    def from_pattern_tables(cls, tables: dict) -> "CostTables":
        """Build from analysed pieces (kind -> PatternTable); displayed 9-digit values."""
        out = cls.from_paper()
        out.source = "analysis"
        for kind, table in tables.items():
            arr = np.zeros((2,) * len(table.rows[0].pattern), dtype=np.int64)
            for row in table.rows:
                r = row.relative.rounded(COST_SCALE)
                if r is None:
                    raise ValueError(f"{kind} {row.pattern}: c-tilde not determined to {COST_SCALE} digits")
                arr[_idx(row.pattern)] = r.value
            out.tables[kind] = arr
            if kind == "C":
                cp = np.zeros_like(arr)
                for p in _C:
                    cp[_idx(p)] = arr[_idx(mirror_pattern(p))]
                out.tables["C'"] = cp
        return out

    def cost(self, kind: str, pattern: str) -> int:
        return int(self.tables[kind][_idx(pattern)])


def _idx(p: str) -> tuple[int, ...]:
    return tuple(L if ch in "Ll" else R for ch in p)


def fmt_cost(v: int) -> str:
    return ScaledInt(v, COST_SCALE).format(COST_SCALE)


# ------------------------------------------------------------------ Lemma-level models

def link_cost(t: CostTables, v1: int, v2: int) -> int:
    """C-C'-link between large states v1 (C side) and v2 (C' side), best wire state."""
    C, Cp = t.tables["C"], t.tables["C'"]
    return int(min(C[v1, v1, s] + Cp[v2, v2, s] for s in (L, R)))


def clause_ring_costs(t: CostTables) -> dict[str, int]:
    """Cost of the three DOWN->UP links for each state of alpha, beta, gamma.

    DOWN of a group sits opposite its loop pair, and links to the next
    group's hat loop: alpha -> beta-hat, beta -> gamma-hat, gamma -> alpha-hat.
    """
    out = {}
    for states in itertools.product((L, R), repeat=3):
        total = 0
        for k in range(3):
            down = 1 - states[k]
            total += link_cost(t, down, states[(k + 1) % 3])
        out["".join("LR"[s] for s in states)] = total
    return out


# ------------------------------------------------------------------ factor graph

class FactorGraph:
    """Binary variables with integer cost tables; exact min-sum by variable elimination."""

    def __init__(self):
        self.n = 0
        self.names: list[str] = []
        self.factors: list[tuple[tuple[int, ...], np.ndarray, str]] = []

    def add_var(self, name: str = "") -> int:
        self.names.append(name or f"t{self.n}")
        self.n += 1
        return self.n - 1

    def add_factor(self, vars_: tuple[int, ...], table: np.ndarray, label: str = ""):
        if len(set(vars_)) != len(vars_):
            raise ValueError(f"factor {label}: repeated terminal")
        if table.shape != (2,) * len(vars_):
            raise ValueError(f"factor {label}: table shape {table.shape} for {len(vars_)} terminals")
        self.factors.append((tuple(vars_), table, label))

    def evaluate(self, assignment) -> int:
        return int(sum(tab[tuple(assignment[v] for v in vs)] for vs, tab, _ in self.factors))

    def minimize(self, fixed: dict[int, int] | None = None) -> tuple[int, list[int]]:
        """Exact minimum and one minimising assignment; ``fixed`` pins variables."""
        fixed = fixed or {}
        facs = []
        for vs, tab, _ in self.factors:
            t = tab
            keep = []
            for axis, v in reversed(list(enumerate(vs))):
                if v in fixed:
                    t = np.take(t, fixed[v], axis=axis)
            keep = tuple(v for v in vs if v not in fixed)
            facs.append((keep, np.asarray(t, dtype=np.int64)))
        free = [v for v in range(self.n) if v not in fixed]
        const = 0
        live = []
        for vs, t in facs:
            if vs:
                live.append((vs, t))
            else:
                const += int(t)
        trace = []
        live_d = dict(enumerate(live))
        nxt = len(live_d)
        touch: dict[int, set[int]] = {v: set() for v in free}
        for k, (vs, _) in live_d.items():
            for v in vs:
                touch[v].add(k)
        remaining = set(free)
        while remaining:
            # greedy min-degree ordering
            best_v, best_scope = None, None
            for v in sorted(remaining):
                scope = set()
                for k in touch[v]:
                    scope.update(live_d[k][0])
                if best_scope is None or len(scope) < len(best_scope):
                    best_v, best_scope = v, scope
                    if len(scope) <= 2:
                        break
            v = best_v
            scope = sorted(best_scope) if best_scope else [v]
            touching = [live_d.pop(k) for k in sorted(touch[v])]
            for vs, _ in touching:
                for u in vs:
                    touch[u].difference_update(k for k in list(touch[u]) if k not in live_d)
            total = np.zeros((2,) * len(scope), dtype=np.int64)
            for vs, t in touching:
                total = total + _expand(t, vs, scope)
            ax = scope.index(v)
            rest = tuple(u for u in scope if u != v)
            trace.append((v, rest, np.argmin(total, axis=ax)))
            reduced = np.min(total, axis=ax)
            if rest:
                live_d[nxt] = (rest, reduced)
                for u in rest:
                    touch[u].add(nxt)
                nxt += 1
            else:
                const += int(reduced)
            remaining.discard(v)
        live = list(live_d.values())
        for vs, t in live:
            const += int(t)
        assignment = [0] * self.n
        for v, val in fixed.items():
            assignment[v] = val
        for v, rest, arg in reversed(trace):
            assignment[v] = int(arg[tuple(assignment[u] for u in rest)]) if rest else int(arg)
        return const, assignment

    def brute_force(self, fixed: dict[int, int] | None = None, limit: int = 22) -> tuple[int, list[int]]:
        """Exhaustive enumeration oracle for small graphs."""
        fixed = fixed or {}
        free = [v for v in range(self.n) if v not in fixed]
        if len(free) > limit:
            raise ValueError(f"{len(free)} free terminals exceed the enumeration limit {limit}")
        k = len(free)
        grid = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1) if k else np.zeros((1, 0), int)
        cols = {}
        for j, v in enumerate(free):
            cols[v] = grid[:, j]
        for v, val in fixed.items():
            cols[v] = np.full(grid.shape[0], val)
        total = np.zeros(grid.shape[0], dtype=np.int64)
        for vs, tab, _ in self.factors:
            total += tab[tuple(cols[v] for v in vs)]
        i = int(np.argmin(total))
        assignment = [0] * self.n
        for v in range(self.n):
            assignment[v] = int(cols[v][i])
        return int(total[i]), assignment


def _expand(t: np.ndarray, vs: tuple[int, ...], scope: list[int]) -> np.ndarray:
    order = sorted(range(len(vs)), key=lambda i: scope.index(vs[i]))
    t = np.transpose(t, order)
    shape = [2 if u in vs else 1 for u in scope]
    return t.reshape(shape)
