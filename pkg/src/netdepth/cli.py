"""``netdepth`` command line: distances, embeddings, depth sweeps, centralities, correlations.

Exit codes: 0 success, 1 pipeline error (one-line diagnostic on stderr),
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import formats, svg
from .analysis import AlignmentError, correlation_matrix
from .centrality import MEASURES, compute
from .datasets import load_karate
from .depth import aggregate_depth, network_depth
from .embed import ScreeRow, embed, permutation_test_stress, scree_surface
from .graph import GraphError, largest_connected_component, read_graph
from .metrics import MetricSpec, compute_distance

DEFAULT_SEED = 0
DEFAULT_T = "1:20"
DEFAULT_DIM = "2:30"
DEFAULT_ALPHA = "0.9,0.99"
METRIC_NAMES = {"sp": "sp", "sp-in": "sp-in", "sp-out": "sp-out",
                "diff": "diffusion", "avgdiff": "avg-diffusion"}
DEFAULT_MEASURES = ("degree", "eigenvector", "closeness", "betweenness", "fragmentation")


class UsageError(Exception):
    pass


def parse_range(text: str, kind=float) -> tuple:
    """``a``, ``a:b`` (inclusive), ``a:b:step`` or ``a,b,c``; strictly increasing."""
    try:
        if ":" in text:
            parts = [float(x) for x in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            a, b = parts[:2]
            step = parts[2] if len(parts) == 3 else 1.0
            if step <= 0:
                raise ValueError
            count = int(math.floor((b - a) / step + 1e-9)) + 1
            vals = [a + k * step for k in range(max(count, 0))]
        else:
            vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"invalid range {text!r}") from None
    if kind is int:
        if any(v != int(v) for v in vals):
            raise UsageError(f"range {text!r} must hold integers")
        vals = [int(v) for v in vals]
    else:
        vals = [round(v, 12) for v in vals]
    if not vals:
        raise UsageError(f"range {text!r} is empty")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise UsageError(f"range {text!r} must be strictly increasing")
    return tuple(vals)


def _add_common(p: argparse.ArgumentParser):
    g = p.add_argument_group("input")
    g.add_argument("--input", help="edge list file (u v [w]); '#' and '%%' start comments")
    g.add_argument("--directed", action="store_true")
    g.add_argument("--weighted", action="store_true", help="read a third column as weight")
    g.add_argument("--weight-transform", choices=("unit", "reciprocal", "identity"), default="unit",
                   help="weights to lengths for geodesic measures (default unit)")
    g.add_argument("--lcc", action="store_true", help="restrict to the largest component")
    g.add_argument("--binarize", action="store_true",
                   help="ignore weights in the random-walk Laplacian")
    m = p.add_argument_group("pipeline")
    m.add_argument("--metric", choices=tuple(METRIC_NAMES), default="sp")
    m.add_argument("--t", default=None, help=f"diffusion times (default {DEFAULT_T})")
    m.add_argument("--dim", default=None, help=f"dimensions (default {DEFAULT_DIM}, capped at N-1)")
    m.add_argument("--method", choices=("smacof", "classical", "nonmetric"), default="smacof")
    m.add_argument("--max-iter", type=int, default=1000)
    m.add_argument("--eps", type=float, default=1e-6)
    m.add_argument("--alpha", default=DEFAULT_ALPHA, help="depth region orders")
    m.add_argument("--seed", type=int, default=DEFAULT_SEED)
    m.add_argument("--threads", type=int, default=None)
    o = p.add_argument_group("output")
    o.add_argument("--out-dir", default=".")
    o.add_argument("--svg", action="store_true", help="also render SVG views")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netdepth", description=__doc__.splitlines()[0].replace("``", ""))
    ap.add_argument("--version", action="version", version=f"netdepth {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="write the distance matrix")
    _add_common(p)

    p = sub.add_parser("embed", help="embed a distance matrix")
    _add_common(p)
    p.add_argument("--dist", help="distance CSV to embed instead of a graph")
    p.add_argument("--scree", action="store_true", help="write the stress table over (t, p)")
    p.add_argument("--n-perm", type=int, default=0, help="permutation test replicates")

    p = sub.add_parser("depth", help="depth spaces over a (t, p) grid")
    _add_common(p)
    p.add_argument("--aggregate", action="store_true",
                   help="also average depth over cells with stress-1 below the cutoff")
    p.add_argument("--stress-cutoff", type=float, default=0.2,
                   help="stress-1 cutoff for --aggregate (default 0.2)")

    p = sub.add_parser("centrality", help="classical centralities")
    _add_common(p)
    p.add_argument("--measures", default=None,
                   help=f"comma list from {','.join(MEASURES)} (default: all applicable)")

    p = sub.add_parser("correlate", help="Spearman correlation of score files")
    _add_common(p)
    p.add_argument("scores", nargs="+", help="centrality CSV or depth JSON files")
    p.add_argument("--level", type=float, default=0.05, help="two-sided test level")
    p.add_argument("--exact", action="store_true", help="exact permutation p-values (n < 10)")

    p = sub.add_parser("reproduce", help="pinned case-study runs")
    _add_common(p)
    p.add_argument("dataset", choices=("karate", "euroroad"))

    p = sub.add_parser("render", help="rebuild SVG views from the files in --out-dir")
    p.add_argument("--out-dir", default=".")
    return ap


# ---------------------------------------------------------------- helpers

def _warn(msg: str):
    print(f"warning: {msg}", file=sys.stderr)


def _load_graph(args):
    if not args.input:
        raise UsageError("--input is required")
    g = read_graph(args.input, directed=args.directed, weighted=args.weighted)
    if args.lcc:
        g, _ = largest_connected_component(g)
    if g.weighted and args.weight_transform == "identity":
        _warn("edge weights are used directly as lengths (identity); weights that measure "
              "interaction strength should use --weight-transform reciprocal or unit")
    return g


def _spec(args) -> MetricSpec:
    kind = METRIC_NAMES[args.metric]
    ts = parse_range(args.t or DEFAULT_T) if kind == "avg-diffusion" else ()
    return MetricSpec(kind, args.weight_transform, args.binarize, ts)


def _times(args, spec: MetricSpec):
    return parse_range(args.t or DEFAULT_T) if spec.uses_t else (None,)


def _dims(args, n: int) -> tuple[int, ...]:
    if args.dim is None:
        dims = tuple(p for p in parse_range(DEFAULT_DIM, int) if p <= n - 1)
        if not dims:
            raise UsageError(f"graph with {n} nodes admits no dimension in {DEFAULT_DIM}")
        return dims
    dims = parse_range(args.dim, int)
    if dims[0] < 1:
        raise UsageError("--dim must be positive")
    if dims[-1] > n - 1:
        raise UsageError(f"--dim {dims[-1]} exceeds N-1 = {n - 1}")
    return dims


def _alphas(args) -> tuple[float, ...]:
    vals = parse_range(args.alpha)
    if any(not 0.0 <= a <= 1.0 for a in vals):
        raise UsageError("--alpha values must lie in [0, 1]")
    return vals


def _embed_opts(args) -> dict:
    if args.method == "classical":
        return {}
    return {"max_iter": args.max_iter, "eps": args.eps, "seed": args.seed}


class Run:
    """Owns the output directory and the provenance record of one command."""

    def __init__(self, args, argv):
        self.dir = Path(args.out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.provenance = {"tool": f"netdepth {__version__}",
                           "command": "netdepth " + " ".join(argv),
                           "seed": getattr(args, "seed", DEFAULT_SEED)}
        self.views: list[dict] = []
        self.svg = getattr(args, "svg", False)
        self.written: list[Path] = []

    def write(self, name: str, text: str) -> Path:
        path = formats._write(self.dir / name, text)
        self.written.append(path)
        return path

    def view(self, **spec):
        if self.svg:
            self.views.append(spec)

    def finish(self):
        if self.views:
            self.write("provenance.json", formats.dumps_json(
                {"provenance": self.provenance, "views": self.views}))
            for path in render_views(self.dir):
                self.written.append(path)
        for path in self.written:
            print(path)


def render_views(out_dir) -> list[Path]:
    """Re-render every SVG listed in ``provenance.json`` from its source file."""
    out_dir = Path(out_dir)
    rec = json.loads((out_dir / "provenance.json").read_text(encoding="utf-8"))
    prov = rec["provenance"]
    written = []
    for v in rec["views"]:
        src = (out_dir / v["source"]).read_text(encoding="utf-8")
        if v["kind"] == "pattern":
            xs, labels, mat, _ = formats.pattern_from_csv(src)
            text = svg.pattern_svg(xs, labels, mat, v["alpha"], v["axis"], v["title"], prov)
        elif v["kind"] == "scree":
            rows = formats.scree_from_csv(src)
            ts = sorted({r.t for r in rows}, key=lambda t: -1 if t is None else t)
            ps = sorted({r.p for r in rows})
            grid = np.full((len(ts), len(ps)), np.nan)
            for r in rows:
                grid[ts.index(r.t), ps.index(r.p)] = r.stress1
            tvals = [0 if t is None else t for t in ts]
            text = svg.heatmap_svg(tvals, ps, grid, "t", "p", v["title"], prov)
        elif v["kind"] == "correlation":
            cm = formats.correlation_from_json(src)
            text = svg.correlation_svg(cm.names, cm.r_s, cm.significant, v["title"], prov)
        else:
            raise ValueError(f"unknown view kind {v['kind']!r}")
        written.append(formats._write(out_dir / v["svg"], text))
    return written


# ---------------------------------------------------------------- commands

def cmd_dist(args, run: Run):
    g = _load_graph(args)
    spec = _spec(args)
    ts = _times(args, spec)
    for t in ts:
        d = compute_distance(g, spec, t)
        name = "distance.csv" if t is None or len(ts) == 1 else f"distance_t{t:g}.csv"
        run.write(name, formats.distance_to_csv(d))


def cmd_embed(args, run: Run):
    if args.dist:
        d0 = formats.read_distance(args.dist)
        n = d0.values.shape[0]
        dists = {d0.t if not isinstance(d0.t, tuple) else None: d0}
        g = spec = None
    else:
        g = _load_graph(args)
        spec = _spec(args)
        n = g.n_nodes
        dists = None
    dims = _dims(args, n)
    opts = _embed_opts(args)
    if args.scree:
        if g is None:
            d = next(iter(dists.values()))
            rows = []
            for p in dims:
                e = embed(d, p, args.method, **opts)
                rows.append(ScreeRow(None, p, e.stress1, e.converged))
        else:
            rows = scree_surface(g, spec, dims, _times(args, spec), args.method, **opts)
        run.write("scree.csv", formats.scree_to_csv(rows))
        run.view(kind="scree", svg="scree.svg", source="scree.csv", title="stress-1 surface")
        return
    if len(dims) != 1:
        raise UsageError("embed takes a single --dim unless --scree is given")
    if dists is None:
        ts = _times(args, spec)
        if len(ts) != 1:
            raise UsageError("embed takes a single diffusion time unless --scree is given")
        d = compute_distance(g, spec, ts[0])
    else:
        d = next(iter(dists.values()))
    e = embed(d, dims[0], args.method, **opts)
    extra = {}
    if args.n_perm:
        if args.n_perm < 19:
            raise UsageError("--n-perm must be at least 19")
        fit_opts = {k: v for k, v in opts.items() if k != "seed"}
        test = permutation_test_stress(d, dims[0], args.n_perm, args.seed, args.method,
                                       **fit_opts)
        extra = {"permutation_p_value": test.p_value, "n_perm": args.n_perm}
    diag = e.diagnostics()
    diag.update(extra)
    run.write("embedding.csv", formats.embedding_to_csv(e))
    run.write("embedding.json", formats.dumps_json(diag))


def _pattern_outputs(run: Run, dp, alphas, p: int | None = None):
    """Pattern CSV and per-cell region report along the swept axis (``p`` fixes a 2-D grid)."""
    suffix = "" if p is None else f"_p{p}"
    axis = "t" if p is not None or dp.axis == "t" else "p"
    name = f"pattern{suffix}.csv"
    run.write(name, formats.pattern_to_csv(dp, p))
    regions = []
    for x, cell in formats.pattern_axis_values(dp, p):
        if cell.ok:
            regions += [(x, cell.depth.region(a)) for a in alphas]
    run.write(f"regions{suffix}.csv", formats.regions_to_csv(regions))
    title = f"depth pattern ({dp.metric}" + ("" if p is None else f", p={p}") + ")"
    run.view(kind="pattern", svg=f"pattern{suffix}.svg", source=name, alpha=alphas[0],
             axis=axis, title=title)


def cmd_depth(args, run: Run):
    g = _load_graph(args)
    spec = _spec(args)
    ts = _times(args, spec)
    dims = _dims(args, g.n_nodes)
    alphas = _alphas(args)
    dp = network_depth(g, spec, dims, ts if spec.uses_t else None, args.method,
                       args.threads, **_embed_opts(args))
    if len(ts) == 1 and len(dims) == 1:
        cell = dp.cell()
        if not cell.ok:
            raise RuntimeError(cell.error)
        run.write("depth.json", formats.depth_to_json(cell.depth))
        run.write("regions.csv", formats.regions_to_csv(
            [(None, cell.depth.region(a)) for a in alphas], with_axis=False))
    elif dp.axis in ("t", "p"):
        _pattern_outputs(run, dp, alphas)
    else:
        for p in dims:
            _pattern_outputs(run, dp, alphas, p)
    rows = [ScreeRow(c.t, c.p, c.stress1, c.converged, c.error) for c in dp]
    run.write("scree.csv", formats.scree_to_csv(rows))
    run.view(kind="scree", svg="scree.svg", source="scree.csv", title="stress-1 per cell")

    failed = [c for c in dp if not c.ok]
    degenerate = [c for c in dp if c.ok and c.hull_degenerate]
    summary = {"cells": len(list(dp)), "failed": [[c.t, c.p, c.error] for c in failed],
               "hull_degenerate": [[c.t, c.p] for c in degenerate]}
    if args.aggregate:
        agg = aggregate_depth(dp, args.stress_cutoff)
        run.write("aggregate.json", formats.depth_to_json(agg))
        run.write("aggregate_regions.csv", formats.regions_to_csv(
            [(None, agg.region(a)) for a in alphas], with_axis=False))
        summary["aggregate_cells"] = len(agg.params["cells"])
    run.write("summary.json", formats.dumps_json(summary))
    if failed or degenerate:
        print(f"summary: {len(failed)} failed cells, {len(degenerate)} hull-degenerate cells "
              "(see summary.json)", file=sys.stderr)
    if failed and len(failed) == summary["cells"]:
        raise RuntimeError(f"every cell failed; first error: {failed[0].error}")


def cmd_centrality(args, run: Run):
    g = _load_graph(args)
    if args.measures:
        names = [m.strip() for m in args.measures.split(",") if m.strip()]
        unknown = [m for m in names if m not in MEASURES]
        if unknown:
            raise UsageError(f"unknown measure(s) {unknown}; choose from {sorted(MEASURES)}")
    else:
        names = list(DEFAULT_MEASURES) + (["polarity"] if g.directed else [])
    opts = {"closeness": {"weight_transform": args.weight_transform},
            "betweenness": {"weight_transform": args.weight_transform},
            "fragmentation": {"weight_transform": args.weight_transform},
            "eigenvector": {"use_weights": g.weighted}}
    vectors, errors = [], []
    for m in names:
        try:
            vectors.append(compute(g, m, **opts.get(m, {})))
        except (GraphError, ValueError, ArithmeticError) as exc:
            errors.append(f"{m}: {exc}")
    if vectors:
        run.write("centrality.csv", formats.centralities_to_csv(vectors))
    if errors:
        raise RuntimeError("; ".join(errors))


def cmd_correlate(args, run: Run):
    if len(args.scores) < 2:
        raise UsageError("correlate needs at least two score files")
    vectors = []
    for path in args.scores:
        vectors += formats.read_scores(path)
    names = [n for n, _ in vectors]
    if len(set(names)) != len(names):
        seen: dict[str, int] = {}
        renamed = []
        for n, v in vectors:
            seen[n] = seen.get(n, 0) + 1
            renamed.append((n if seen[n] == 1 else f"{n}#{seen[n]}", v))
        vectors = renamed
    cm = correlation_matrix(vectors, alpha=args.level, exact=args.exact)
    run.write("correlation_r.csv", formats.correlation_to_csv(cm, "r"))
    run.write("correlation_p.csv", formats.correlation_to_csv(cm, "p"))
    run.write("correlation.json", formats.correlation_to_json(cm))
    run.view(kind="correlation", svg="correlation.svg", source="correlation.json",
             title=f"Spearman r_s (crossed: p >= {args.level:g})")


def cmd_reproduce(args, run: Run):
    from . import reproduce

    if args.dataset == "karate":
        report = reproduce.karate_report()
        g = load_karate()
        dp = reproduce.karate_diffusion_pattern(g)
        _pattern_outputs(run, dp, (0.9,))
    else:
        if not args.input:
            raise UsageError("reproduce euroroad needs --input (see scripts/fetch_euroroad.sh)")
        report = reproduce.euroroad_report(read_graph(args.input))
    run.write(f"{args.dataset}_report.json", formats.dumps_json(report))


COMMANDS = {"dist": cmd_dist, "embed": cmd_embed, "depth": cmd_depth,
            "centrality": cmd_centrality, "correlate": cmd_correlate,
            "reproduce": cmd_reproduce}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "render":
        try:
            for path in render_views(args.out_dir):
                print(path)
        except (OSError, ValueError, KeyError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        return 0
    run = Run(args, argv)
    try:
        COMMANDS[args.command](args, run)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"netdepth: error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, AlignmentError, ValueError, RuntimeError, ArithmeticError,
            OSError, np.linalg.LinAlgError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    run.finish()
    return 0


if __name__ == "__main__":
    sys.exit(main())
