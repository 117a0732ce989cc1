"""Command-line entry point: ``mwthard <subcommand> ...``.

Exit status 0 means every check passed, 1 a verification failure, 2 a
usage or input error.  Results go to stdout or files, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .arithmetic import DISPLAY_DIGITS, WORK_SCALE, parse_fixed_decimal
from .geometry import parse_polygon, validate_simple_polygon
from .skeleton import PIECE_BETA

log = logging.getLogger("mwthard")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    precision: int = WORK_SCALE
    digits: int = DISPLAY_DIGITS
    beta: str = PIECE_BETA
    mode: str = "mini"
    workers: int | None = None
    out: Path | None = None

    def __post_init__(self):
        if self.precision < self.digits:
            raise UsageError(f"precision {self.precision} below display digits {self.digits}")
        try:
            parse_fixed_decimal(self.beta, 6)
        except ValueError as exc:
            raise UsageError(f"beta: {exc}") from None


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(cfg: RunConfig, name: str, text: str | bytes) -> Path:
    cfg.out.mkdir(parents=True, exist_ok=True)
    p = cfg.out / name
    if isinstance(text, bytes):
        p.write_bytes(text)
    else:
        p.write_text(text, encoding="utf-8")
    log.info("wrote %s", p)
    return p


def _figure(cfg: RunConfig, stem: str, doc) -> None:
    from .report import render_png, to_svg

    if cfg.out is None:
        return
    _write(cfg, stem + ".svg", to_svg(doc))
    cfg.out.mkdir(parents=True, exist_ok=True)
    render_png(doc, cfg.out / (stem + ".png"))


def _polygon(path):
    try:
        poly = parse_polygon(_read(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    rep = validate_simple_polygon(poly)
    if not rep.ok and any(f.startswith("orientation") for f in rep.failures):
        poly = type(poly)(tuple(reversed(poly.vertices)), poly.scale)
        log.info("reversed %s to counterclockwise order", path)
        rep = validate_simple_polygon(poly)
    if not rep.ok:
        raise UsageError(f"{path}: not a simple polygon: {rep.failures[0]}")
    return poly


def _pieces(path):
    from .pieces import MalformedFile, load_pieces

    try:
        return load_pieces(_read(path))
    except MalformedFile as exc:
        raise UsageError(f"{path}: {exc}") from None


# ---------------------------------------------------------------- subcommands

def cmd_polygon_mwt(a, cfg: RunConfig) -> int:
    from .polygon_mwt import EdgeConstraint, MwtError, polygon_mwt
    from .report import triangulation_figure

    poly = _polygon(a.poly)
    forbid = []
    for s in a.forbid or []:
        try:
            i, j = (int(t) for t in s.split(","))
        except ValueError:
            raise UsageError(f"--forbid expects i,j got {s!r}") from None
        forbid.append((i, j))
    try:
        res = polygon_mwt(poly, EdgeConstraint.of(forbid), cfg.precision)
    except MwtError as exc:
        print(f"no result: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(f"vertices {len(poly)}")
    print(f"cost {res.optimal_cost.display(cfg.digits)}")
    print(f"multiplicity {res.multiplicity}")
    print("witness " + " ".join(f"{i}-{j}" for i, j in sorted(res.witness.internal_edges)))
    if res.candidates_degenerate:
        print("note: a candidate optimum has a zero-area triangle")
    _figure(cfg, Path(a.poly).stem, triangulation_figure(poly, res.witness.internal_edges, f"MWT {Path(a.poly).name}"))
    return EXIT_OK


def cmd_beta_check(a, cfg: RunConfig) -> int:
    from .skeleton import beta_skeleton_certify

    if a.piece:
        cat = _pieces(a.piece)
        targets = [(p.name, p.boundary_edges(), p.cycle(), p.scale) for p in cat]
    else:
        poly = _polygon(a.poly)
        v = poly.vertices
        targets = [(Path(a.poly).stem, [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))], list(v), poly.scale)]
    ok = True
    for name, edges, pts, scale in targets:
        rep = beta_skeleton_certify(edges, pts, cfg.beta, local=not a.global_check)
        print(f"{name}: {rep.checked} boundary edges, threshold {rep.threshold}: {'pass' if rep.passed else 'FAIL'}")
        if rep.binding is not None:
            b = rep.binding
            c2 = b.min_beta_sq_cos
            shown = b.min_beta.display(6) if b.min_beta is not None else "< 1"
            print(f"  cos(alpha)^2 = {c2.numerator}/{c2.denominator}; beta = {shown}; "
                  f"edge {b.edge[0].format(scale)} -- {b.edge[1].format(scale)}")
        for v in rep.violators:
            print(f"  violator {v.edge[0].format(scale)} -- {v.edge[1].format(scale)} "
                  f"by {v.witness.format(scale)}")
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_diamond(a, cfg: RunConfig) -> int:
    from .skeleton import diamond_test

    poly = _polygon(a.points)
    v = poly.vertices
    if a.edge:
        i, j = a.edge
        if not (0 <= i < len(v) and 0 <= j < len(v)) or i == j:
            raise UsageError("edge indices out of range")
        keep = diamond_test(v[i], v[j], v)
        print(f"edge {i}-{j}: {'kept' if keep else 'eliminated'}")
        return EXIT_OK if keep else EXIT_FAIL
    kept = [(i, j) for i in range(len(v)) for j in range(i + 1, len(v)) if diamond_test(v[i], v[j], v)]
    total = len(v) * (len(v) - 1) // 2
    print(f"{len(kept)} of {total} pairs pass the diamond test")
    for i, j in kept:
        print(f"{i}-{j}")
    return EXIT_OK


def cmd_verify_piece(a, cfg: RunConfig) -> int:
    from .pieces import load_w, validate_piece

    cat = _pieces(a.piece)
    w = load_w(_read(a.w)) if a.w else None
    ok = True
    for p in cat:
        print(f"piece {p.name}: {len(p.cycle())} points")
        for t in p.terminals:
            print(f"terminal triangle basepoint: ({t.apex.format(p.scale).replace(' ', ',')})")
            for s in "LR":
                vec = t.corner(s) - t.apex
                print(f"     edge vector in state {s}: ({vec.format(p.scale).replace(' ', ',')})")
        rep = validate_piece(p, w, cfg.beta)
        if all(t.on_grid() for t in p.terminals):
            print("All terminal coordinates are multiples of 0.01")
        dups = sum(1 for f in rep.failures if f.startswith("duplicate"))
        print(f"{dups} duplicate point(s).")
        for n in rep.notes:
            print(n)
        for f in rep.failures:
            print(f"FAIL {f}")
        print(f"piece {p.name}: {'ok' if rep.ok else 'FAILED'}")
        ok &= rep.ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_analyze_piece(a, cfg: RunConfig) -> int:
    from .analysis import AmbiguousOptimum, analyze_piece
    from .polygon_mwt import MwtError
    from .report import emit_table, piece_figure

    cat = _pieces(a.piece)
    names = a.name or cat.names()
    tables = []
    for n in names:
        if n not in cat.names():
            raise UsageError(f"no piece named {n!r}")
        p = cat[n]
        try:
            t = analyze_piece(p, cfg.workers, cfg.precision)
        except (AmbiguousOptimum, MwtError) as exc:
            print(f"{n}: {exc}", file=sys.stderr)
            return EXIT_FAIL
        for r in t.rows:
            print(f"case {r.pattern}: {len(p.pattern_polygon(r.pattern))} points. "
                  f"{r.cost.display(cfg.digits)} {r.reduced.display(cfg.digits)}")
        tables.append(t)
        _figure(cfg, f"piece_{n}", piece_figure(p))
    print(emit_table(tables, a.format, cfg.digits), end="")
    if cfg.out is not None:
        _write(cfg, "patterns.tsv", emit_table(tables, "tsv", cfg.digits))
        _write(cfg, "patterns.tex", emit_table(tables, "tex", cfg.digits))
    return EXIT_OK


def cmd_check_w(a, cfg: RunConfig) -> int:
    from .analysis import SIGMA, LemmaFails, check_terminal_lemma
    from .pieces import MalformedFile, load_w

    try:
        w = load_w(_read(a.data))
    except MalformedFile as exc:
        raise UsageError(f"{a.data}: {exc}") from None
    vr = w.validate()
    if not vr.ok:
        for f in vr.failures:
            print(f"FAIL {f}")
        return EXIT_FAIL
    sigma = parse_fixed_decimal(a.sigma, 2) if a.sigma else SIGMA
    try:
        rep = check_terminal_lemma(w, cfg.workers, a.e_max, sigma, cfg.precision)
    except LemmaFails as exc:
        print(f"FAIL {exc}")
        return EXIT_FAIL
    for ln in rep.log_lines():
        print(ln)
    return EXIT_OK if rep.margin_ok else EXIT_FAIL


def _load_formula(path):
    from .sat import MalformedInstance, Planar3SatInstance, parse_instance, transform_instance

    try:
        obj = parse_instance(_read(path))
    except (MalformedInstance, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    if isinstance(obj, Planar3SatInstance):
        res = transform_instance(obj)
        return res.formula, res.embedding, obj
    return obj[0], obj[1], None


def cmd_sat_reduce(a, cfg: RunConfig) -> int:
    from .sat import (BRUTE_FORCE_VARS, Planar3SatInstance, brute_force_cnf, format_instance,
                      one_in_three_count, parse_instance, solve_1in3, transform_instance)

    try:
        inst = parse_instance(_read(a.instance))
    except ValueError as exc:
        raise UsageError(f"{a.instance}: {exc}") from None
    if not isinstance(inst, Planar3SatInstance):
        raise UsageError("sat-reduce expects a planar 3-SAT instance (header 'p cnf3')")
    res = transform_instance(inst)
    text = format_instance(res.formula, res.embedding)
    if cfg.out is not None:
        _write(cfg, Path(a.instance).stem + ".1in3", text)
    else:
        print(text, end="")
    for n in res.notes:
        print(n, file=sys.stderr)
    if not a.check:
        return EXIT_OK
    src = brute_force_cnf(inst.variables, inst.clauses).satisfiable
    f = res.formula
    if len(f.variables) <= BRUTE_FORCE_VARS:
        dst = one_in_three_count(f.clauses, f.variables).satisfiable
    else:
        dst = solve_1in3(f.clauses, f.variables).satisfiable
    print(f"source satisfiable: {src}; 1-in-3 satisfiable: {dst}; "
          f"{len(f.variables)} variables, {len(f.clauses)} clauses", file=sys.stderr)
    return EXIT_OK if src == dst else EXIT_FAIL


def _network(a, cfg):
    from .layout import LayoutError, build_network, emit_reduction
    from .pieces import designer_pieces

    formula, emb, _ = _load_formula(a.instance)
    cat = _pieces(a.pieces) if getattr(a, "pieces", None) else designer_pieces()
    try:
        g = build_network(formula, emb, cfg.mode)
        out = emit_reduction(g, catalog=cat)
    except LayoutError as exc:
        print(f"layout failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return None, None
    return g, out


def _separation_ok(out) -> bool:
    from .costmodel import DELTA4

    s = out.states
    ok = s.sat_min is None or s.sat_min <= out.threshold
    ok &= s.unsat_min is None or s.unsat_min >= out.target[1] + DELTA4
    if s.sat_min is not None and s.unsat_min is not None:
        ok &= s.unsat_min - s.sat_min >= DELTA4
    return ok


def cmd_layout(a, cfg: RunConfig) -> int:
    from .costmodel import fmt_cost
    from .layout import audit_layout
    from .pieces import PieceCatalog, format_pieces
    from .report import layout_figure

    g, out = _network(a, cfg)
    if g is None:
        return EXIT_FAIL
    rep = audit_layout(g, out, beta=cfg.beta)
    side = out.sidecar(rep)
    sep = _separation_ok(out)
    print(f"mode {out.mode} ({'proof-grade' if out.proof_grade else 'NOT proof-grade'})")
    print(f"target weight w = {side['target_weight'][0]}  threshold = {side['threshold']}  gap = {side['gap']}")
    se = side["state_enumeration"]
    print(f"satisfiable: {se['satisfiable']}; satisfying min {se['satisfying_min']}; "
          f"violating min {se['violating_min']}; separation {'holds' if sep else 'FAILS'}")
    print(f"audit: {'pass' if rep.ok else 'FAIL'}; {len(out.points)} instantiated points")
    if cfg.out is not None:
        _write(cfg, "reduction.json", json.dumps(side, indent=2, sort_keys=True) + "\n")
        cat = PieceCatalog({pc.name: pc for _, pc in out.placed})
        _write(cfg, "points.txt", format_pieces(cat) if len(cat) else "# no instantiated pieces\n")
        rows = ["group\tisolated_min"] + [f"{k}\t{fmt_cost(v)}" for k, v in out.attribution.items()]
        _write(cfg, "attribution.tsv", "\n".join(rows) + "\n")
        rows = ["assignment\tcost"] + [f"{k}\t{fmt_cost(v)}" for k, v in out.states.per_assignment.items()]
        _write(cfg, "assignments.tsv", "\n".join(rows) + "\n")
        _figure(cfg, "layout", layout_figure(g, out))
    return EXIT_OK if rep.ok and sep else EXIT_FAIL


def cmd_audit(a, cfg: RunConfig) -> int:
    from .layout import audit_layout

    g, out = _network(a, cfg)
    if g is None:
        return EXIT_FAIL
    rep = audit_layout(g, out, beta=cfg.beta)
    for n in rep.notes:
        print(n)
    for f in rep.failures:
        print(f"FAIL {f}")
    print("audit: " + ("pass" if rep.ok else "FAIL"))
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mwthard", description="MWT gadget verification and reduction tools")
    ap.add_argument("--precision", type=int, default=WORK_SCALE, help="working decimal digits")
    ap.add_argument("--digits", type=int, default=DISPLAY_DIGITS, help="displayed decimal digits")
    ap.add_argument("--beta", default=PIECE_BETA, help="beta-skeleton threshold")
    ap.add_argument("--workers", type=int, default=None, help="worker processes (env MWT_WORKERS)")
    ap.add_argument("--out", type=Path, default=None, help="directory for files and figures")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("polygon-mwt", help="MWT of a simple polygon")
    p.add_argument("--poly", required=True)
    p.add_argument("--forbid", action="append", metavar="I,J")
    p.set_defaults(func=cmd_polygon_mwt)

    p = sub.add_parser("beta-check", help="certify boundary edges against the beta-skeleton")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--piece")
    g.add_argument("--poly")
    p.add_argument("--global", dest="global_check", action="store_true", help="check against every point")
    p.set_defaults(func=cmd_beta_check)

    p = sub.add_parser("diamond", help="diamond test on a point list")
    p.add_argument("--points", required=True)
    p.add_argument("--edge", type=int, nargs=2, metavar=("I", "J"))
    p.set_defaults(func=cmd_diamond)

    p = sub.add_parser("verify-piece", help="structural checks of a piece file")
    p.add_argument("--piece", required=True)
    p.add_argument("--w", help="W polygon file for the terminal copies")
    p.set_defaults(func=cmd_verify_piece)

    p = sub.add_parser("analyze-piece", help="pattern tables of pieces")
    p.add_argument("--piece", required=True)
    p.add_argument("--name", action="append")
    p.add_argument("--format", choices=("text", "tex", "tsv"), default="text")
    p.set_defaults(func=cmd_analyze_piece)

    p = sub.add_parser("check-w", help="the 21-case terminal edge check on W")
    p.add_argument("--data", required=True)
    p.add_argument("--e-max", type=int, default=None)
    p.add_argument("--sigma", default=None)
    p.set_defaults(func=cmd_check_w)

    p = sub.add_parser("sat-reduce", help="planar 3-SAT to positive planar 1-in-3-SAT")
    p.add_argument("--instance", required=True)
    p.add_argument("--check", action="store_true", help="compare satisfiability by enumeration")
    p.set_defaults(func=cmd_sat_reduce)

    for name, func, hlp in (("layout", cmd_layout, "build, emit and audit a gadget network"),
                            ("audit", cmd_audit, "audit a gadget network")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--instance", required=True)
        p.add_argument("--mode", choices=("mini", "proof"), default="mini")
        p.add_argument("--pieces", help="piece file with wire coordinates (default: designer set)")
        p.set_defaults(func=func)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    workers = a.workers
    if workers is None and os.environ.get("MWT_WORKERS"):
        try:
            workers = int(os.environ["MWT_WORKERS"])
        except ValueError:
            print("MWT_WORKERS must be an integer", file=sys.stderr)
            return EXIT_USAGE
    try:
        cfg = RunConfig(a.precision, a.digits, a.beta, getattr(a, "mode", "mini"), workers, a.out)
        return a.func(a, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
