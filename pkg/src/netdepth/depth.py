"""Projected Tukey depth of point clouds and embedded networks.

For a query point ``x`` and a sample ``x_1..x_n`` with scatter ``S``, the
projection of sample point ``i`` onto the line through ``x`` and ``x_j`` is
``y_ij = (x_i - x)^T S^+ (x_j - x)``. The depth of ``x`` is

    min_j  min(#{i : y_ij <= 0}, #{i : y_ij >= 0}) / n

i.e. the univariate halfspace depth of zero, minimized over the ``n``
data-driven directions. Depths of sample points are integer multiples of
``1/n`` and at least ``1/n``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _parallel
from .embed import embed
from .graph import Graph
from .metrics import DistanceMatrix, MetricSpec, compute_distance


class DepthError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ScatterConfig:
    points: np.ndarray
    inverse_scatter: np.ndarray
    rank: int


@dataclass(frozen=True, eq=False)
class DepthSpace:
    """Depth value per node for one parameter setting.

    ``counts`` holds the integer half-line counts when the space comes
    straight from a point cloud; aggregated spaces carry ``counts=None``.
    """

    values: np.ndarray
    labels: tuple[str, ...]
    params: dict = field(default_factory=dict)
    counts: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.labels)

    def region(self, alpha: float) -> "DepthRegion":
        return depth_region(self, alpha)

    def median(self) -> list[int]:
        return median_nodes(self)


@dataclass(frozen=True)
class DepthRegion:
    alpha: float
    q_alpha: float
    members: tuple[int, ...]
    labels: tuple[str, ...]


@dataclass(frozen=True, eq=False)
class Contour:
    vertices: np.ndarray
    members: tuple[int, ...]
    degenerate: bool


def scatter(points: np.ndarray) -> ScatterConfig:
    """Sample covariance (``1/(n-1)``) and its spectral pseudo-inverse.

    Eigenvalues below ``eps * max(n, p) * sigma_max`` are treated as zero.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim != 2:
        raise DepthError("points must be an (n, p) array")
    n, p = x.shape
    if n < 2:
        raise DepthError("need at least two points")
    if not np.all(np.isfinite(x)):
        raise DepthError("points must be finite")
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (n - 1)
    lam, vec = np.linalg.eigh(0.5 * (cov + cov.T))
    smax = lam.max()
    if smax <= 0 or not np.any(xc):
        raise DepthError("zero scatter: all points coincide, depth is undefined")
    tau = np.finfo(float).eps * max(n, p) * smax
    keep = lam > tau
    inv = (vec[:, keep] / lam[keep]) @ vec[:, keep].T
    inv = 0.5 * (inv + inv.T)
    return ScatterConfig(x, inv, int(keep.sum()))


def halfspace_depth_1d(x0: float, sample: Sequence[float]) -> float:
    """``min(#{y <= x0}, #{y >= x0}) / n``; ties count on both sides."""
    y = np.asarray(sample, dtype=float)
    if y.size == 0:
        raise DepthError("empty sample")
    return min(int(np.sum(y <= x0)), int(np.sum(y >= x0))) / y.size


def _count(points: np.ndarray, inv: np.ndarray, x: np.ndarray) -> int:
    xt = points - x
    y = (xt @ inv) @ xt.T
    le = np.count_nonzero(y <= 0, axis=0)
    ge = np.count_nonzero(y >= 0, axis=0)
    return int(np.minimum(le, ge).min())


def ptd_point(x: Sequence[float], sc: ScatterConfig) -> float:
    """Projected Tukey depth of an arbitrary point w.r.t. the sample in ``sc``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (sc.points.shape[1],) or not np.all(np.isfinite(x)):
        raise DepthError("query point must be finite and match the sample dimension")
    return _count(sc.points, sc.inverse_scatter, x) / sc.points.shape[0]


def depth_counts(points: np.ndarray, sc: ScatterConfig | None = None) -> np.ndarray:
    """Integer depth counts of every sample point against the full cloud."""
    sc = sc or scatter(points)
    pts = sc.points
    # the query row of pts - pts[k] is exactly zero, so y_kj = y_ik = 0 with no roundoff
    return np.array([_count(pts, sc.inverse_scatter, pts[k]) for k in range(pts.shape[0])],
                    dtype=np.int64)


def depth_space(points: np.ndarray, labels: Sequence[str] | None = None,
                params: dict | None = None) -> DepthSpace:
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or x.shape[0] < 3:
        raise DepthError("depth space needs at least three points")
    counts = depth_counts(x)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(x)))
    return DepthSpace(counts / x.shape[0], labels, dict(params or {}), counts)


def depth_region(ds: DepthSpace, alpha: float) -> DepthRegion:
    """Nodes whose depth reaches the ``alpha`` depth quantile.

    The threshold is the ``k``-th largest depth with
    ``k = max(1, ceil((1 - alpha) n))``; nodes tied with it are included, so
    the region can hold more than ``k`` nodes.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DepthError("alpha must lie in [0, 1]")
    n = ds.n
    k = max(1, math.ceil(round((1.0 - alpha) * n, 9)))
    v = np.asarray(ds.values)
    q = float(np.sort(v)[::-1][k - 1])
    members = tuple(int(i) for i in np.flatnonzero(v >= q))
    return DepthRegion(float(alpha), q, members, tuple(ds.labels[i] for i in members))


def median_nodes(ds: DepthSpace) -> list[int]:
    """All nodes of maximal depth, by index."""
    v = np.asarray(ds.values)
    return [int(i) for i in np.flatnonzero(v == v.max())]


def convex_hull_2d(points: np.ndarray) -> np.ndarray:
    """Monotone-chain hull, counter-clockwise from the lowest (then leftmost) vertex.

    Collinear boundary points are dropped. Fewer than three returned vertices
    mean the input was a point or a segment.
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts[np.lexsort((pts[:, 0], pts[:, 1]))] if len(pts) else pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    order = sorted(map(tuple, pts))
    lower: list = []
    for q in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    upper: list = []
    for q in reversed(order):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    hull = np.array(lower[:-1] + upper[:-1])
    start = np.lexsort((hull[:, 0], hull[:, 1]))[0]
    return np.roll(hull, -start, axis=0)


def depth_contour_2d(points: np.ndarray, ds: DepthSpace, alpha: float) -> Contour:
    """Convex hull of the depth region of order ``alpha`` in a planar embedding."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DepthError("depth contours need a 2-D configuration")
    region = depth_region(ds, alpha)
    hull = convex_hull_2d(pts[list(region.members)])
    return Contour(hull, region.members, len(hull) < 3)


# ---------------------------------------------------------------- networks


@dataclass(frozen=True, eq=False)
class DepthCell:
    t: float | None
    p: int
    depth: DepthSpace | None
    stress1: float = float("nan")
    converged: bool = False
    hull_degenerate: bool = False
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.depth is not None


@dataclass(frozen=True, eq=False)
class DepthPattern:
    """Depth spaces over a grid of diffusion times and/or dimensions.

    ``ts == (None,)`` for metrics without a time parameter. Cells are keyed
    by ``(t, p)``.
    """

    labels: tuple[str, ...]
    ts: tuple
    ps: tuple[int, ...]
    cells: dict
    metric: str = ""

    def __post_init__(self):
        for name, grid in (("t", [t for t in self.ts if t is not None]), ("p", self.ps)):
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise DepthError(f"{name} grid must be strictly increasing")

    @property
    def axis(self) -> str:
        if len(self.ts) > 1 and len(self.ps) > 1:
            return "tp"
        return "t" if len(self.ts) > 1 else "p"

    def cell(self, t=None, p=None) -> DepthCell:
        t = self.ts[0] if t is None and len(self.ts) == 1 else t
        p = self.ps[0] if p is None and len(self.ps) == 1 else p
        return self.cells[(t, p)]

    def series(self, t=None, p=None) -> list[DepthCell]:
        """Cells along one axis with the other held fixed."""
        if p is not None or len(self.ps) == 1:
            p = self.ps[0] if p is None else p
            return [self.cells[(ti, p)] for ti in self.ts]
        t = self.ts[0] if t is None else t
        return [self.cells[(t, pi)] for pi in self.ps]

    def __iter__(self):
        for t in self.ts:
            for p in self.ps:
                yield self.cells[(t, p)]


def _cell(g: Graph, dist: DistanceMatrix, t, p: int, method: str, opts: dict) -> DepthCell:
    try:
        emb = embed(dist, p, method, **opts)
        params = {"metric": dist.metric, "t": t, "p": p, "method": emb.method,
                  "stress1": emb.stress1}
        ds = depth_space(emb.config, g.labels, params)
        degenerate = bool(np.all(ds.counts == 1))
        return DepthCell(t, p, ds, emb.stress1, emb.converged, degenerate)
    except Exception as exc:  # noqa: BLE001 - a failing cell must not abort the sweep
        return DepthCell(t, p, None, error=f"{type(exc).__name__}: {exc}")


def network_depth(g: Graph, metric: MetricSpec | str = "sp", ps: Iterable[int] = (3,),
                  ts: Iterable[float] | None = None, method: str = "smacof",
                  threads: int | None = None, **embed_opts) -> DepthPattern:
    """Distance matrix -> embedding -> depth space for every ``(t, p)`` cell.

    For directed geodesic metrics the distance matrix is unfolded and the
    depth is taken on the row cloud (``sp-out``: positions along out-going
    geodesics; ``sp-in`` uses the transposed matrix). Failing cells are kept
    with their error message; cells where every node has depth ``1/n`` are
    flagged ``hull_degenerate``.
    """
    spec = MetricSpec(metric) if isinstance(metric, str) else metric
    ps = tuple(int(p) for p in ps)
    if not ps:
        raise DepthError("empty dimension grid")
    if spec.uses_t:
        if ts is None:
            raise DepthError("diffusion metric needs diffusion times")
        ts = tuple(float(t) for t in ts)
        if not ts:
            raise DepthError("empty time grid")
    else:
        ts = (None,)

    dists: dict = {}
    errors: dict = {}
    for t in ts:
        try:
            dists[t] = compute_distance(g, spec, t)
        except Exception as exc:  # noqa: BLE001
            errors[t] = f"{type(exc).__name__}: {exc}"

    def run(key):
        t, p = key
        if t in errors:
            return DepthCell(t, p, None, error=errors[t])
        return _cell(g, dists[t], t, p, method, embed_opts)

    keys = [(t, p) for t in ts for p in ps]
    n_threads = _parallel.threads(threads)
    if n_threads > 1 and len(keys) > 1:
        with ThreadPoolExecutor(n_threads) as pool:
            results = list(pool.map(run, keys))
    else:
        results = [run(k) for k in keys]
    return DepthPattern(g.labels, ts, ps, dict(zip(keys, results)), spec.kind)


def aggregate_depth(dp: DepthPattern, stress_cutoff: float = 0.2) -> DepthSpace:
    """Per-node mean depth over cells with ``stress1 <= stress_cutoff``.

    Failed and hull-degenerate cells are skipped.
    """
    keep = [c for c in dp if c.ok and not c.hull_degenerate and c.stress1 <= stress_cutoff]
    if not keep:
        raise DepthError("no grid cell survives the stress cutoff")
    values = np.mean([c.depth.values for c in keep], axis=0)
    params = {"metric": dp.metric, "aggregate": "mean", "stress_cutoff": stress_cutoff,
              "cells": [[c.t, c.p] for c in keep]}
    return DepthSpace(values, dp.labels, params)
