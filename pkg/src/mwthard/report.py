"""Tables, vector figures and raster renderings.

Everything here is deterministic: tables are built from exact integers and
SVG coordinates are written as exact decimals in a fixed element order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arithmetic import DISPLAY_DIGITS, IntInterval, ScaledInt
from .costmodel import COST_SCALE, DELTA1, DELTA2, EPS1, EPS2
from .geometry import Point

# -------------------------------------------------------------------- tables

_NAMES = {EPS1: ("ε₁", r"\varepsilon_1"), EPS2: ("ε₂", r"\varepsilon_2"),
          DELTA1: ("δ₁", r"\delta_1"), DELTA2: ("δ₂", r"\delta_2")}
_HEAD = ("pattern", "multiplicity", "c", "c_bar", "c_tilde")
_TEX_HEAD = ("pattern", "multiplicity", "internal cost $c$", r"reduced internal cost $\bar c$",
             r"relative reduced cost $\tilde c$")


def _cell(iv: IntInterval, digits: int, group: str | None) -> str:
    return iv.display(digits, group)


def _annotation(iv: IntInterval, tex: bool) -> str:
    r = iv.rounded(COST_SCALE)
    if r is None or r.value not in _NAMES:
        return ""
    return _NAMES[r.value][1 if tex else 0]


def emit_table(tables, fmt: str = "text", digits: int = DISPLAY_DIGITS) -> str:
    """Pattern tables as aligned text, TeX rows or tab-separated values.

    The text and TeX forms group digits in threes the way printed tables do.
    """
    tables = list(tables)
    if fmt == "tsv":
        lines = ["\t".join(("piece",) + _HEAD + ("note",))]
        for t in tables:
            for r in t.rows:
                lines.append("\t".join([t.piece, r.pattern, str(r.multiplicity),
                                        _cell(r.cost, digits, None), _cell(r.reduced, digits, None),
                                        _cell(r.relative, digits, None), _annotation(r.relative, False)]))
        return "\n".join(lines) + "\n"
    if fmt == "tex":
        lines = [r"\begin{tabular}{|c|c|r|r|r|}", r"\hline",
                 " & ".join(_TEX_HEAD) + r" \\", r"\hline"]
        for t in tables:
            lines.append(rf"\multicolumn{{5}}{{|l|}}{{{t.piece}}} \\ \hline")
            for r in t.rows:
                note = _annotation(r.relative, True)
                rel = _cell(r.relative, digits, r"\,") + (f" = ${note}$" if note else "")
                lines.append(" & ".join([r.pattern, str(r.multiplicity), _cell(r.cost, digits, r"\,"),
                                         _cell(r.reduced, digits, r"\,"), rel]) + r" \\")
            lines.append(r"\hline")
        lines.append(r"\end{tabular}")
        return "\n".join(lines) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    rows = [_HEAD]
    for t in tables:
        for r in t.rows:
            note = _annotation(r.relative, False)
            rows.append((f"{t.piece} {r.pattern}", str(r.multiplicity), _cell(r.cost, digits, " "),
                         _cell(r.reduced, digits, " "), _cell(r.relative, digits, " ") + (f" = {note}" if note else "")))
    widths = [max(len(row[k]) for row in rows) for k in range(len(_HEAD))]
    out = []
    for i, row in enumerate(rows):
        out.append("  ".join(c.ljust(w) if k == 0 else c.rjust(w) for k, (c, w) in enumerate(zip(row, widths))).rstrip())
        if i == 0:
            out.append("-" * len(out[0]))
    return "\n".join(out) + "\n"


def emit_cost_table(tables, kinds=None) -> str:
    """c-tilde of the state cost model per piece kind and pattern, one row each."""
    import itertools

    lines = ["kind\tpattern\tc_tilde\tnote"]
    for kind in kinds or sorted(tables.tables):
        arr = tables.tables[kind]
        for states in itertools.product((0, 1), repeat=arr.ndim):
            pat = "".join("LR"[s] for s in states[:2]) + "".join("lr"[s] for s in states[2:])
            v = int(arr[states])
            note = _NAMES.get(v, ("", ""))[0]
            lines.append(f"{kind}\t{pat}\t{ScaledInt(v, COST_SCALE).format(COST_SCALE)}\t{note}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- figures

@dataclass
class Layer:
    name: str
    color: str
    items: list = field(default_factory=list)     # ("seg", p, q) | ("pt", p) | ("rect", lo, hi) | ("text", p, s)


@dataclass
class FigureDoc:
    scale: int
    layers: list[Layer] = field(default_factory=list)
    title: str = ""

    def layer(self, name: str, color: str) -> Layer:
        for ly in self.layers:
            if ly.name == name:
                return ly
        ly = Layer(name, color)
        self.layers.append(ly)
        return ly

    def bbox(self):
        xs, ys = [], []
        for ly in self.layers:
            for it in ly.items:
                for p in it[1:]:
                    if isinstance(p, Point):
                        xs.append(p.x)
                        ys.append(p.y)
        if not xs:
            return 0, 0, 1, 1
        return min(xs), min(ys), max(xs), max(ys)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for ly in self.layers:
            for it in ly.items:
                out[it[0]] = out.get(it[0], 0) + 1
        return out


def triangulation_figure(poly, internal_edges=(), title: str = "", labels: bool = True) -> FigureDoc:
    doc = FigureDoc(poly.scale, title=title)
    v = poly.vertices
    n = len(v)
    bd = doc.layer("boundary", "#000000")
    for i in range(n):
        bd.items.append(("seg", v[i], v[(i + 1) % n]))
    tri = doc.layer("triangulation", "#1f77b4")
    for i, j in sorted(internal_edges):
        tri.items.append(("seg", v[i], v[j]))
    pts = doc.layer("points", "#d62728")
    for p in v:
        pts.items.append(("pt", p))
    if labels:
        lab = doc.layer("labels", "#555555")
        for i, p in enumerate(v):
            lab.items.append(("text", p, str(i)))
    return doc


def piece_figure(piece, pattern: str | None = None, internal_edges=(), title: str = "") -> FigureDoc:
    doc = FigureDoc(piece.scale, title=title or piece.name)
    if pattern is not None:
        poly = piece.pattern_polygon(pattern)
        return triangulation_figure(poly, internal_edges, title or f"{piece.name} {pattern}", labels=False)
    bd = doc.layer("boundary", "#000000")
    for a, b in piece.boundary_edges():
        bd.items.append(("seg", a, b))
    term = doc.layer("terminals", "#2ca02c")
    for t in piece.terminals:
        term.items.append(("seg", t.apex, t.left))
        term.items.append(("seg", t.apex, t.right))
        term.items.append(("seg", t.left, t.right))
    pts = doc.layer("points", "#d62728")
    for p in piece.points:
        pts.items.append(("pt", p))
    return doc


def layout_figure(g, out=None, title: str = "") -> FigureDoc:
    """Gadget boxes, corridors and (when instantiated) piece boundaries; 4-digit coordinates."""
    f = 100
    doc = FigureDoc(4, title=title or f"{g.mode.name} layout")
    boxes = doc.layer("gadgets", "#7f7f7f")
    for name in sorted(g.boxes):
        b = g.boxes[name]
        boxes.items.append(("rect", Point(b.lo.x * f, b.lo.y * f), Point(b.hi.x * f, b.hi.y * f)))
    cor = doc.layer("corridors", "#1f77b4")
    for c in g.corridors:
        for a, b in zip(c.path, c.path[1:]):
            cor.items.append(("seg", Point(a.x * f, a.y * f), Point(b.x * f, b.y * f)))
    lab = doc.layer("labels", "#555555")
    for name in sorted(g.boxes):
        b = g.boxes[name]
        lab.items.append(("text", Point((b.lo.x + b.hi.x) // 2 * f, (b.lo.y + b.hi.y) // 2 * f), name))
    if out is not None and out.boundary_edges:
        pc = doc.layer("pieces", "#000000")
        seen = set()
        for a, b in out.boundary_edges:
            key = (min(a, b), max(a, b))
            if key not in seen:
                seen.add(key)
                pc.items.append(("seg", key[0], key[1]))
    return doc


def _dec(v: int, scale: int) -> str:
    return ScaledInt(v, scale).canonical()


def to_svg(doc: FigureDoc) -> str:
    """Standalone SVG; y is flipped so the drawing matches the math orientation."""
    x0, y0, x1, y1 = doc.bbox()
    span = max(x1 - x0, y1 - y0, 1)
    pad = span // 20 + 1
    sw = span // 400 + 1
    r = span // 250 + 1
    fs = span // 60 + 1
    s = doc.scale

    def X(v):
        return _dec(v, s)

    def Y(v):
        return _dec(-v, s)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{X(x0 - pad)} {Y(y1 + pad)} '
           f'{X(x1 - x0 + 2 * pad)} {X(y1 - y0 + 2 * pad)}">']
    if doc.title:
        out.append(f"<title>{_esc(doc.title)}</title>")
    for ly in doc.layers:
        out.append(f'<g id="{_esc(ly.name)}" stroke="{ly.color}" fill="none" stroke-width="{X(sw)}">')
        for it in ly.items:
            if it[0] == "seg":
                a, b = it[1], it[2]
                out.append(f'<line x1="{X(a.x)}" y1="{Y(a.y)}" x2="{X(b.x)}" y2="{Y(b.y)}"/>')
            elif it[0] == "pt":
                p = it[1]
                out.append(f'<circle cx="{X(p.x)}" cy="{Y(p.y)}" r="{X(r)}" fill="{ly.color}"/>')
            elif it[0] == "rect":
                lo, hi = it[1], it[2]
                out.append(f'<rect x="{X(lo.x)}" y="{Y(hi.y)}" width="{X(hi.x - lo.x)}" height="{X(hi.y - lo.y)}"/>')
            elif it[0] == "text":
                p = it[1]
                out.append(f'<text x="{X(p.x)}" y="{Y(p.y)}" font-size="{X(fs)}" stroke="none" '
                           f'fill="{ly.color}">{_esc(it[2])}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def render_png(doc: FigureDoc, path, dpi: int = 150, size: float = 6.0) -> None:
    """Raster rendering with matplotlib (Agg); float coordinates are fine for a picture."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.collections import LineCollection
    from matplotlib.patches import Rectangle

    f = 10.0 ** -doc.scale
    fig, ax = plt.subplots(figsize=(size, size))
    for ly in doc.layers:
        segs = [[(a.x * f, a.y * f), (b.x * f, b.y * f)] for kind, a, b, *_ in
                (it for it in ly.items if it[0] == "seg")]
        if segs:
            ax.add_collection(LineCollection(segs, colors=ly.color, linewidths=0.6, label=ly.name))
        pts = [it[1] for it in ly.items if it[0] == "pt"]
        if pts:
            ax.plot([p.x * f for p in pts], [p.y * f for p in pts], ".", color=ly.color, ms=2.5)
        for it in ly.items:
            if it[0] == "rect":
                lo, hi = it[1], it[2]
                ax.add_patch(Rectangle((lo.x * f, lo.y * f), (hi.x - lo.x) * f, (hi.y - lo.y) * f,
                                       fill=False, edgecolor=ly.color, lw=0.6))
            elif it[0] == "text":
                ax.annotate(it[2], (it[1].x * f, it[1].y * f), fontsize=6, color=ly.color)
    x0, y0, x1, y1 = doc.bbox()
    pad = max(x1 - x0, y1 - y0, 1) * f / 20
    ax.set_xlim(x0 * f - pad, x1 * f + pad)
    ax.set_ylim(y0 * f - pad, y1 * f + pad)
    ax.set_aspect("equal")
    if doc.title:
        ax.set_title(doc.title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi, metadata={"Software": None})
    plt.close(fig)
