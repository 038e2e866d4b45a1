"""Command-line front end.

Graph files are line oriented::

    vertices 3
    genus 0 1 0        # optional, one value per vertex
    edge 1 2           # repeated; order is the global edge order
    edge 2 3
    tree 1 2           # repeated; must name listed edges

Exit status: 0 when every check passes, 1 when a verification fails,
2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from typing import List, Optional, Sequence, Tuple

from .algebra import QQ, PrimeField
from .dga import check_d_squared, check_grading
from .plumbing import (GraphError, PlumbingGraph, build_ce, build_mpp, ginzburg_truncation,
                       validate_graph, verify_graph)
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class GraphSyntaxError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphSyntaxError(line, col, f"expected an integer, got {tok!r}") from None


def read_graph(text: str) -> Tuple[PlumbingGraph, List[str]]:
    """Parse a graph file; returns the validated (tree-first) graph and warnings."""
    vertices = None
    genus = None
    edges: List[Tuple[int, int]] = []
    tree_specs = []  # (src, dst, line, col)
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = []
        pos = 0
        for tok in body.split():
            col = body.index(tok, pos) + 1
            pos = col - 1 + len(tok)
            toks.append((tok, col))
        if not toks:
            continue
        head, hcol = toks[0]
        args = toks[1:]
        if head == "vertices":
            if len(args) != 1:
                raise GraphSyntaxError(lineno, hcol, "vertices takes one integer")
            if vertices is not None:
                raise GraphSyntaxError(lineno, hcol, "vertices given twice")
            vertices = _int(args[0][0], lineno, args[0][1])
            if vertices < 1:
                raise GraphSyntaxError(lineno, args[0][1], "need at least one vertex")
        elif head == "genus":
            if not args:
                raise GraphSyntaxError(lineno, hcol, "genus needs one value per vertex")
            genus = [(_int(t, lineno, c), c) for t, c in args]
            for gv, c in genus:
                if gv < 0:
                    raise GraphSyntaxError(lineno, c, "genus must be non-negative")
            genus_line = lineno
        elif head in ("edge", "tree"):
            if vertices is None:
                raise GraphSyntaxError(lineno, hcol, f"{head} before vertices")
            if len(args) != 2:
                raise GraphSyntaxError(lineno, hcol, f"{head} takes SRC DST")
            pair = []
            for t, c in args:
                x = _int(t, lineno, c)
                if not 1 <= x <= vertices:
                    raise GraphSyntaxError(lineno, c, f"vertex {x} out of range 1..{vertices}")
                pair.append(x)
            if head == "edge":
                edges.append(tuple(pair))
            else:
                tree_specs.append((pair[0], pair[1], lineno, hcol))
        else:
            raise GraphSyntaxError(lineno, hcol, f"unknown directive {head!r}")
    if vertices is None:
        raise GraphSyntaxError(1, 1, "missing vertices directive")
    if genus is not None and len(genus) != vertices:
        raise GraphSyntaxError(genus_line, 1, f"genus lists {len(genus)} values for {vertices} vertices")
    tree = set()
    for s, t, lineno, col in tree_specs:
        exact = [i for i, e in enumerate(edges) if e == (s, t)]
        either = exact or [i for i, e in enumerate(edges) if e == (t, s)]
        if not either:
            raise GraphSyntaxError(lineno, col, f"tree edge {s} {t} is not a listed edge")
        free = [i for i in either if i not in tree]
        if not free:
            raise GraphSyntaxError(lineno, col, f"duplicate tree edge {s} {t}")
        tree.add(free[0])
    g = PlumbingGraph(vertices, tuple(edges), frozenset(tree),
                      tuple(x for x, _ in genus) if genus else ())
    try:
        g, _, warns = validate_graph(g)
    except GraphError as exc:
        raise GraphSyntaxError(len(text.splitlines()) or 1, 1, str(exc)) from None
    return g, warns


def parse_graph(text: str) -> PlumbingGraph:
    return read_graph(text)[0]


def format_graph(g: PlumbingGraph) -> str:
    lines = [f"vertices {g.vertices}"]
    if any(g.genus):
        lines.append("genus " + " ".join(map(str, g.genus)))
    lines += [f"edge {s} {t}" for s, t in g.edges]
    lines += [f"tree {g.edges[a][0]} {g.edges[a][1]}" for a in sorted(g.tree)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

class InputError(ValueError):
    pass


def _int_list(text: str, what: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what} must be a comma-separated list of integers") from None


def _load_graph(path: str) -> Tuple[PlumbingGraph, List[str]]:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return read_graph(text)
    except GraphSyntaxError as exc:
        raise InputError(f"{path}: {exc}") from None


def _field(arg: Optional[int]):
    if arg is None:
        return QQ
    try:
        return PrimeField(arg)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_present(args, out: dict) -> Report:
    g, warns = _load_graph(args.graph)
    out["warnings"] += warns
    field = _field(args.field)
    if args.model == "ce":
        p = build_ce(g, field, raw_genus=args.raw_genus)
    elif args.raw_genus:
        raise InputError("--raw-genus only applies to the ce model")
    elif args.model == "mpp":
        p = build_mpp(g, field)
    else:
        try:
            p = ginzburg_truncation(g, field)
        except GraphError as exc:
            raise InputError(str(exc)) from None
    out["presentation"] = p.to_dict()
    out["text"] = p.render()
    report = Report("present")
    report.extend(check_d_squared(p), "d^2: ")
    report.extend(check_grading(p), "grading: ")
    return report


def cmd_verify(args, out: dict) -> Report:
    g, warns = _load_graph(args.graph)
    out["warnings"] += warns
    return verify_graph(g, _field(args.field))


def cmd_internal(args, out: dict) -> Report:
    from .internal import (InternalSpec, build_internal, check_retraction, check_truncation_closed,
                           verify_functor_equation, verify_homotopy_identity)
    m = tuple(_int_list(args.potentials, "--potentials")) if args.potentials else ()
    try:
        spec = InternalSpec(args.n, m, args.max_p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    p = build_internal(spec)
    out["text"] = p.render()
    out["presentation"] = p.to_dict()
    report = Report("internal")
    report.extend(check_d_squared(p), "d^2: ")
    report.extend(check_grading(p), "grading: ")
    report.extend(check_truncation_closed(p), "truncation: ")
    report.extend(check_retraction(spec), "retraction: ")
    h = verify_homotopy_identity(spec)
    report.extend(h.report, "homotopy: ")
    out["homotopy_sign"] = h.sign
    if spec.max_p >= 1:
        report.extend(verify_functor_equation(spec), "functor: ")
    if spec.n >= 2:
        from .internal import build_kontsevich, verify_a_infinity
        report.extend(verify_a_infinity(build_kontsevich(spec.n, spec.m)), "A-infinity: ")
    return report


def cmd_reduce_genus(args, out: dict) -> Report:
    from .genus import genus_reduction
    from .pipeline import PipelineError
    if args.g < 1:
        raise InputError("--g must be at least 1")
    try:
        res = genus_reduction(args.g)
    except PipelineError as exc:
        r = Report("reduce-genus")
        r.add(f"step {exc.step}", False, str(exc))
        return r
    out["log"] = [s.to_dict() for s in res.log]
    out["automorphisms"] = res.pipeline.automorphism_count
    out["destabilizations"] = res.pipeline.destabilization_count
    lines = [res.relabeled.render()]
    if args.log:
        lines = [s.line() for s in res.log] + lines
    out["text"] = "\n".join(lines)
    out["presentation"] = res.relabeled.to_dict()
    report = Report("reduce-genus")
    report.extend(res.pipeline.report("pipeline"))
    report.extend(res.report)
    return report


def cmd_destab_demo(args, out: dict) -> Report:
    from .pipeline import PipelineError
    from .secondary import run_destab_script
    try:
        res = run_destab_script(args.case)
    except PipelineError as exc:
        r = Report("destab-demo")
        r.add(f"step {exc.step}", False, str(exc))
        return r
    out["log"] = [s.to_dict() for s in res.log]
    out["text"] = "\n".join([s.line() for s in res.log] + [res.final.render()])
    out["presentation"] = res.final.to_dict()
    report = res.pipeline.report("destab-demo")
    report.add("crossing generators removed",
               not ({"p", "q", "r", "s"} & set(res.final.free_generators())))
    return report


def cmd_count_reps(args, out: dict) -> Report:
    from .reps import count_reps
    g, warns = _load_graph(args.graph)
    out["warnings"] += warns
    p = args.field
    _field(p)
    t = _int_list(args.t, "--t") if args.t else [1] * g.vertices
    if len(t) == 1:
        t = t * g.vertices
    if len(t) != g.vertices or any(x % p == 0 for x in t):
        raise InputError("--t needs one nonzero residue per vertex")
    dims = _int_list(args.dim, "--dim") if args.dim else [1] * g.vertices
    if len(dims) != g.vertices or any(x < 0 for x in dims):
        raise InputError("--dim needs one non-negative integer per vertex")
    try:
        n = count_reps(g, p, t, dict(zip(g.vertex_ids, dims)))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.update({"graph": format_graph(g), "field": p, "t": t, "dimension_vector": dims, "count": n})
    out["text"] = str(n)
    return Report("count-reps")


COMMANDS = {
    "present": cmd_present,
    "verify": cmd_verify,
    "internal": cmd_internal,
    "reduce-genus": cmd_reduce_genus,
    "destab-demo": cmd_destab_demo,
    "count-reps": cmd_count_reps,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plumbdga", description="Exact DG-algebra workbench for plumbings.")
    ap.add_argument("--json", action="store_true", help="emit the JSON report instead of text")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("present", help="print a presentation")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--model", choices=["ce", "mpp", "ginzburg"], default="ce")
    sp.add_argument("--raw-genus", action="store_true")
    sp.add_argument("--field", type=int, help="prime for F_p coefficients (default: rationals)")

    sp = sub.add_parser("verify", help="d^2, grading, phi and augmentation checks")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--field", type=int)

    sp = sub.add_parser("internal", help="internal algebra and its verifications")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-p", type=int, default=3)
    sp.add_argument("--potentials")

    sp = sub.add_parser("reduce-genus", help="run the genus cancellation script")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--log", action="store_true")

    sp = sub.add_parser("destab-demo", help="cancel a crossing of two bands")
    sp.add_argument("--case", type=int, choices=[1, 2, 3], required=True)

    sp = sub.add_parser("count-reps", help="count representations over F_p")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--field", type=int, required=True)
    sp.add_argument("--t")
    sp.add_argument("--dim")
    return ap


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    out = {"command": args.command, "inputs": {k: v for k, v in vars(args).items()
                                               if k not in ("command", "json")},
           "warnings": []}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = COMMANDS[args.command](args, out)
    except InputError as exc:
        out.update(status="error", error=str(exc), checks=[],
                   elapsed_ms=round((time.perf_counter() - start) * 1000, 3))
        if args.json:
            print(json.dumps(out, indent=2), file=stdout)
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    out["status"] = "pass" if report.ok else "fail"
    out["checks"] = [c.to_dict() for c in report.checks]
    out["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    text = out.pop("text", None)
    if args.json:
        print(json.dumps(out, indent=2, default=str), file=stdout)
    else:
        for w in out["warnings"]:
            print(f"warning: {w}", file=stderr)
        if text:
            print(text, file=stdout)
        for c in report.failures():
            print(c.line(), file=stdout)
        n = len(report.checks)
        if n:
            print(f"{out['status']}: {n - len(report.failures())}/{n} checks passed", file=stdout)
    return EXIT_OK if report.ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())
