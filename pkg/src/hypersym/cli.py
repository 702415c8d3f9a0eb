"""Command-line front end.

Every command prints one JSON document (or a plain table with
``--format table``). Exit status: 0 complete, 2 some section hit a cap and
is partial, 1 error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .charpoly import charpoly_coefficients, codegree_m_formula, total_degree
from .group import (DEFAULT_GROUP_CAP, GroupError, enumerate_group, exact_cyclic_index,
                    forbidden_pattern_report, structure_partition)
from .hypergraph import (Hypergraph, ParseError, find_p_hm_bipartition, format_hypergraph,
                         generalized_power, is_connected, load_hypergraph)
from .report import (cplx, diagonal_from, encode_coloring, encode_group, encode_partition, rational, to_jsonable,
                     verify_report)
from .spectral import ConvergenceError, charpoly_resultant_2d, spectral_radius, spectrum_2d
from .symmetry import (chromatic_upper_bound, coloring_exists, cyclic_index_hypergraph,
                       is_ell_symmetric_traces, odd_transversal)
from .tensor import adjacency_tensor, is_weakly_irreducible, load_tensor
from .traces import DEFAULT_CLASS_CAP, trace_table

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2


class Context:
    """Loaded input plus bookkeeping shared by the section builders."""

    def __init__(self, path: str, args):
        self.path = path
        self.args = args
        self.graph: Optional[Hypergraph] = None
        suffix = Path(path).suffix.lower()
        if suffix == ".tns":
            self.tensor = load_tensor(path)
        elif suffix == ".uhg":
            self.graph = load_hypergraph(path)
            self.tensor = adjacency_tensor(self.graph)
        else:
            raise ValueError(f"unknown input kind {suffix!r}: use .uhg or .tns")
        self.partial = False
        self.timing: dict[str, float] = {}

    @property
    def kind(self) -> str:
        return "hypergraph" if self.graph is not None else "tensor"

    def descriptor(self) -> dict:
        a = self.tensor
        out = {"file": Path(self.path).name, "kind": self.kind, "n": a.n, "m": a.m}
        if self.graph is not None:
            out["edges"] = len(self.graph.edges)
        else:
            out["entries"] = a.nnz
        return out

    def timed(self, name: str, fn: Callable):
        start = time.perf_counter()
        try:
            return fn()
        finally:
            self.timing[name] = round(time.perf_counter() - start, 6)


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------

def _dmax(ctx: Context) -> int:
    return ctx.args.dmax if getattr(ctx.args, "dmax", None) else 3 * ctx.tensor.m


def section_radius(ctx: Context, tol: float = 1e-12) -> dict:
    a = ctx.tensor
    try:
        rho, x = spectral_radius(a, tol=tol)
    except (ValueError, ConvergenceError) as exc:
        return {"error": str(exc)}
    return {"rho": rho, "x": [float(v) for v in x], "tol": tol}


def section_traces(ctx: Context, dmax: int) -> tuple[dict, object]:
    tt = trace_table(ctx.tensor, dmax, cap=ctx.args.cap, partial=True)
    if not tt.is_complete:
        ctx.partial = True
    return {"d_max": dmax, "depth": tt.depth, "complete": tt.is_complete, "values": tt.to_records()}, tt


def section_charpoly(ctx: Context, tt, k: Optional[int] = None) -> dict:
    k = tt.depth if k is None else min(k, tt.depth)
    prefix = charpoly_coefficients(tt, k)
    out = {"total_degree": total_degree(ctx.tensor.m, ctx.tensor.n), "depth": prefix.depth,
           "coefficients": prefix.to_records()}
    if ctx.graph is not None and prefix.depth >= ctx.tensor.m:
        out["codegree_m"] = {"computed": rational(prefix[ctx.tensor.m]),
                             "formula": rational(codegree_m_formula(ctx.graph))}
    return out


def section_window(tt) -> dict:
    nonzero = [d for d in range(1, tt.depth + 1) if tt[d] != 0]
    return {"c_hat": math.gcd(*nonzero) if nonzero else 0, "depth": tt.depth,
            "nonzero_degrees": nonzero, "label": "upper-multiple"}


def section_group(ctx: Context) -> dict:
    try:
        rep = enumerate_group(ctx.tensor, cap=ctx.args.group_cap)
    except GroupError as exc:
        return {"error": str(exc)}
    if not rep.complete:
        ctx.partial = True
    return encode_group(rep)


def section_partitions(ctx: Context, group: dict) -> list[dict]:
    if "error" in group:
        return []
    out = []
    seeds = [(diagonal_from(g), 0) for g in group["generators_D0"]]
    if group.get("coset_reps") and group["c"] > 1:
        seeds.append((diagonal_from(group["coset_reps"][1]), 1))
    for d, j in seeds:
        if d.is_identity():
            continue
        try:
            sp = structure_partition(ctx.tensor, d, j, ell=group["c"])
        except GroupError as exc:
            out.append({"error": str(exc)})
            continue
        entry = encode_partition(sp)
        try:
            fp = forbidden_pattern_report(ctx.tensor, sp, hypergraph=ctx.graph)
            entry["forbidden_patterns"] = [list(p) for p in fp.patterns]
            entry["symmetric_congruence"] = fp.symmetric
            if fp.non_edges is not None:
                entry["non_edges"] = [list(e) for e in fp.non_edges]
        except GroupError as exc:
            entry["forbidden_patterns_error"] = str(exc)
        out.append(entry)
    return out


def section_colorings(ctx: Context) -> dict:
    m = ctx.tensor.m
    out = {}
    for ell in [d for d in range(m, 0, -1) if m % d == 0]:
        out[str(ell)] = encode_coloring(coloring_exists(ctx.tensor, m, m // ell, normalize=True))
    return out


def section_oddt(ctx: Context) -> dict:
    res = odd_transversal(ctx.tensor)
    return {"X": sorted(res.X) if res.exists else None}


def section_cyclic(ctx: Context, group: dict, window: Optional[dict]) -> dict:
    out = {}
    if window is not None:
        out["window"] = window
    if ctx.graph is not None:
        if is_connected(ctx.graph):
            out["coloring"] = cyclic_index_hypergraph(ctx.graph)
        else:
            out["coloring_error"] = "hypergraph is disconnected"
    if "c" in group:
        out["group"] = group["c"]
    return out


def section_chromatic(ctx: Context) -> dict:
    try:
        cb = chromatic_upper_bound(ctx.graph)
    except (ValueError, GroupError) as exc:
        return {"error": str(exc)}
    return {"bound": cb.bound, "coloring": list(cb.coloring), "r": cb.r, "c": cb.c,
            "candidates": {str(k): v for k, v in cb.candidates.items()}, "source": cb.source}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_analyze(ctx: Context) -> dict:
    a, g = ctx.tensor, ctx.graph
    res: dict = {}
    ok, comps = is_weakly_irreducible(a)
    res["structure"] = {"weakly_irreducible": ok, "strong_components": len(comps),
                        "nonnegative": a.is_nonnegative(), "symmetric": a.is_symmetric()}
    if g is not None:
        res["structure"]["connected"] = is_connected(g)
        bip = find_p_hm_bipartition(g)
        res["structure"]["p_hm_bipartition"] = (None if bip is None
                                                else {"V1": sorted(bip[0]), "p": bip[1]})
    res["radius"] = ctx.timed("radius", lambda: section_radius(ctx))
    traces, tt = ctx.timed("traces", lambda: section_traces(ctx, _dmax(ctx)))
    res["traces"] = traces
    res["charpoly"] = ctx.timed("charpoly", lambda: section_charpoly(ctx, tt))
    group = ctx.timed("group", lambda: section_group(ctx))
    res["group"] = group
    res["cyclic_index"] = ctx.timed("cyclic", lambda: section_cyclic(ctx, group, section_window(tt)))
    res["colorings"] = ctx.timed("colorings", lambda: section_colorings(ctx))
    res["odd_transversal"] = section_oddt(ctx)
    res["partitions"] = ctx.timed("partitions", lambda: section_partitions(ctx, group))
    if g is not None and group.get("c", 1) >= 2 and is_connected(g):
        res["chromatic"] = ctx.timed("chromatic", lambda: section_chromatic(ctx))
    return res


def cmd_traces(ctx: Context) -> dict:
    traces, _ = section_traces(ctx, _dmax(ctx))
    return {"traces": traces}


def cmd_charpoly(ctx: Context) -> dict:
    k = ctx.args.k if ctx.args.k is not None else _dmax(ctx)
    traces, tt = section_traces(ctx, k)
    if tt.depth < k:
        ctx.partial = True
    return {"charpoly": section_charpoly(ctx, tt, k)}


def cmd_radius(ctx: Context) -> dict:
    return {"radius": section_radius(ctx, ctx.args.tol)}


def cmd_color(ctx: Context) -> dict:
    m = ctx.tensor.m
    if ctx.args.ell is not None:
        if m % ctx.args.ell:
            raise ValueError(f"ell={ctx.args.ell} does not divide m={m}")
        sigma, target = m, m // ctx.args.ell
    else:
        sigma, target = ctx.args.sigma or m, ctx.args.target if ctx.args.target is not None else 1
    cert = coloring_exists(ctx.tensor, sigma, target, normalize=not ctx.args.raw)
    out = {"sigma": sigma, "target": target, "coloring": encode_coloring(cert)}
    if cert is not None:
        out["classes"] = {str(k): v for k, v in sorted(cert.color_classes().items())}
    return out


def cmd_symmetry(ctx: Context) -> dict:
    v = is_ell_symmetric_traces(ctx.tensor, ctx.args.ell, _dmax(ctx), cap=ctx.args.cap, certify=True)
    if v.depth < _dmax(ctx) and v.status != "certified-not-symmetric":
        ctx.partial = True
    out = {"ell": v.ell, "status": v.status, "depth": v.depth, "witness": v.witness}
    if v.certificate is not None:
        out["coloring"] = encode_coloring(v.certificate)
    return {"symmetry": out}


def cmd_oddt(ctx: Context) -> dict:
    return {"odd_transversal": section_oddt(ctx)}


def cmd_group(ctx: Context) -> dict:
    group = section_group(ctx)
    res = {"group": group}
    if "c" in group:
        res["exact_cyclic_index"] = exact_cyclic_index(ctx.tensor)
        res["partitions"] = section_partitions(ctx, group)
    return res


def cmd_charpoly2(ctx: Context) -> dict:
    cp = charpoly_resultant_2d(ctx.tensor)
    coeffs = [rational(c) if cp.is_exact() else cplx(c) for c in cp.coefficients]
    roots = spectrum_2d(ctx.tensor)
    return {"charpoly2": {"degree": cp.degree, "coefficients": coeffs, "roots": [cplx(r) for r in roots]}}


COMMANDS = {
    "analyze": cmd_analyze, "traces": cmd_traces, "charpoly": cmd_charpoly, "radius": cmd_radius,
    "color": cmd_color, "symmetry": cmd_symmetry, "oddt": cmd_oddt, "group": cmd_group,
    "charpoly2": cmd_charpoly2,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            rows.append((prefix, f"{obj['num']}" if obj["den"] == 1 else f"{obj['num']}/{obj['den']}"))
            return
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj) and len(obj) > 0:
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(obj)))


def render_table(doc: dict) -> str:
    rows: list = []
    _flatten("", {"input": doc["input"], **doc["results"]}, rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypersym", description="Spectral symmetry analysis of tensors and uniform hypergraphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("path", help="input file (.uhg hypergraph or .tns tensor)")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "table"), default="json")
        sp.add_argument("--no-timing", action="store_true", help="omit timing for byte-stable output")
        sp.add_argument("--cap", type=int, default=DEFAULT_CLASS_CAP, help="trace class cap per degree")
        sp.add_argument("--group-cap", type=int, default=DEFAULT_GROUP_CAP,
                        help="largest group whose elements are listed")
        return sp

    common(sub.add_parser("analyze", help="full pipeline")).add_argument("--dmax", type=int)
    common(sub.add_parser("traces", help="generalized traces")).add_argument("--dmax", type=int)
    sp = common(sub.add_parser("charpoly", help="characteristic polynomial prefix"))
    sp.add_argument("--k", type=int)
    sp.add_argument("--dmax", type=int)
    common(sub.add_parser("radius", help="spectral radius")).add_argument("--tol", type=float, default=1e-12)
    sp = common(sub.add_parser("color", help="(m, ell)-coloring or general modular labelling"))
    sp.add_argument("--ell", type=int)
    sp.add_argument("--sigma", type=int)
    sp.add_argument("--target", type=int)
    sp.add_argument("--raw", action="store_true", help="do not pin the first label to sigma")
    sp = common(sub.add_parser("symmetry", help="spectral ell-symmetry verdict"))
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--dmax", type=int)
    common(sub.add_parser("oddt", help="odd transversal"))
    common(sub.add_parser("group", help="diagonal symmetry group"))
    common(sub.add_parser("charpoly2", help="n = 2 characteristic polynomial by resultant"))
    sp = sub.add_parser("power", help="generalized power G^{m,s} of a hypergraph")
    sp.add_argument("path")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--out")
    return p


def run(argv=None) -> tuple[int, Optional[dict]]:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "power":
            g = load_hypergraph(args.path)
            _emit(format_hypergraph(generalized_power(g, args.m, args.s)), args.out)
            return EXIT_OK, None
        ctx = Context(args.path, args)
        start = time.perf_counter()
        results = COMMANDS[args.command](ctx)
        doc = {
            "tool": "hypersym",
            "version": __version__,
            "command": args.command,
            "input": ctx.descriptor(),
            "config": {k: v for k, v in sorted(vars(args).items())
                       if k not in ("path", "out", "format", "no_timing", "command")},
            "complete": not ctx.partial,
            "results": results,
        }
        failures = verify_report(json.loads(json.dumps(doc, default=to_jsonable)), ctx.tensor, ctx.graph)
        doc["certificates_verified"] = not failures
        if failures:
            doc["certificate_failures"] = failures
        if not args.no_timing:
            ctx.timing["total"] = round(time.perf_counter() - start, 6)
            doc["timing"] = ctx.timing
        if args.format == "table":
            text = render_table(doc)
        else:
            text = json.dumps(doc, indent=2, default=to_jsonable) + "\n"
        _emit(text, args.out)
        if failures:
            return EXIT_ERROR, doc
        return (EXIT_PARTIAL if ctx.partial else EXIT_OK), doc
    except (ParseError, ValueError, GroupError, OSError) as exc:
        sys.stderr.write(f"hypersym: error: {exc}\n")
        return EXIT_ERROR, None


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
