"""Node-to-node distances: geodesic and diffusion.

The diffusion distance between nodes ``i`` and ``j`` at time ``t`` is the
Euclidean distance between the occupation probabilities of two continuous
time random walkers started at ``i`` and ``j``::

    p(t | i) = e_i^T expm(-t L),    L = I - D^{-1} A

For undirected graphs ``L`` is similar to the symmetric normalized
Laplacian, so the exponential is taken through a symmetric
eigendecomposition. Directed graphs use ``scipy.linalg.expm``
(scaling and squaring with Padé approximants).

A random walk with teleportation would slot in by replacing
:func:`rw_normalized_laplacian`; it is not provided.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
from scipy.sparse.csgraph import dijkstra

from .graph import Graph, GraphError

log = logging.getLogger(__name__)


class UnreachableError(GraphError):
    """Some ordered node pair has no connecting path."""

    def __init__(self, source: str, target: str):
        super().__init__(f"node {target!r} is unreachable from {source!r}")
        self.source = source
        self.target = target


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    values: np.ndarray
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    metric: str
    t: float | tuple[float, ...] | None = None
    symmetric: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError("distance values do not match the label lists")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("distances must be finite and nonnegative")
        if self.symmetric and (v.shape[0] != v.shape[1]
                               or not np.allclose(v, v.T, rtol=0, atol=1e-12)):
            raise ValueError("matrix flagged symmetric is not")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def is_square(self) -> bool:
        return self.values.shape[0] == self.values.shape[1]


@dataclass(frozen=True, eq=False)
class HeatKernel:
    values: np.ndarray
    t: float


def shortest_path_matrix(g: Graph, direction: str = "undirected") -> DistanceMatrix:
    """All-pairs shortest path lengths, edge weights read as lengths.

    ``direction`` is ``"undirected"``, ``"out"`` (entry ``(i, j)`` is the
    length of the shortest path i -> j) or ``"in"`` (the transpose of
    ``"out"``). ``"undirected"`` ignores edge orientation.
    """
    if direction not in ("undirected", "out", "in"):
        raise ValueError(f"unknown direction {direction!r}")
    directed = g.directed and direction != "undirected"
    # csgraph drops explicit zeros, lengths are guaranteed positive
    adj = g.sparse_adjacency()
    d = dijkstra(adj, directed=directed)
    if directed and direction == "in":
        d = d.T
    bad = np.argwhere(~np.isfinite(d))
    if bad.size:
        i, j = bad[0]
        if direction == "in":
            raise UnreachableError(g.labels[j], g.labels[i])
        raise UnreachableError(g.labels[i], g.labels[j])
    np.fill_diagonal(d, 0.0)
    metric = {"undirected": "sp", "out": "sp-out", "in": "sp-in"}[direction]
    sym = not directed
    if sym:
        d = 0.5 * (d + d.T)  # exact already; guard against roundoff in weighted sums
    return DistanceMatrix(d, g.labels, g.labels, metric, None, sym)


def _strengths(a: np.ndarray) -> np.ndarray:
    s = a.sum(axis=1)
    if np.any(s <= 0):
        raise GraphError(f"node with zero (out-)strength: {int(np.flatnonzero(s <= 0)[0])}")
    return s


def rw_normalized_laplacian(g: Graph, binarize: bool = False) -> np.ndarray:
    """``I - D^{-1} A`` with ``D`` the diagonal of (out-)strengths."""
    a = g.adjacency(weights=not binarize)
    s = _strengths(a)
    return np.eye(g.n_nodes) - a / s[:, None]


def heat_kernel(g: Graph, t: float, binarize: bool = False) -> HeatKernel:
    """Row-stochastic matrix whose row ``i`` is the walker distribution p(t|i)."""
    if t < 0:
        raise ValueError("diffusion time must be nonnegative")
    n = g.n_nodes
    if t == 0:
        return HeatKernel(np.eye(n), float(t))
    a = g.adjacency(weights=not binarize)
    s = _strengths(a)
    if not g.directed:
        r = 1.0 / np.sqrt(s)
        lsym = np.eye(n) - r[:, None] * a * r[None, :]
        lsym = 0.5 * (lsym + lsym.T)
        lam, u = np.linalg.eigh(lsym)
        k = (u * np.exp(-t * lam)) @ u.T
        k = r[:, None] * k * np.sqrt(s)[None, :]
    else:
        k = scipy.linalg.expm(-t * (np.eye(n) - a / s[:, None]))
    if not np.all(np.isfinite(k)):
        raise FloatingPointError("matrix exponential produced non-finite entries")
    np.clip(k, 0.0, None, out=k)
    rows = k.sum(axis=1)
    drift = np.max(np.abs(rows - 1.0))
    if drift > 1e-8:
        log.warning("heat kernel row-sum drift %.3g at t=%g, renormalizing", drift, t)
    k /= rows[:, None]
    return HeatKernel(k, float(t))


def _row_distances(p: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", p, p)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (p @ p.T)
    np.maximum(d2, 0.0, out=d2)
    d = np.sqrt(d2)
    # the Gram expansion loses accuracy for tiny distances; recompute those directly
    small = d < 1e-6 * max(1.0, float(np.sqrt(sq.max())))
    np.fill_diagonal(small, False)
    for i, j in np.argwhere(np.triu(small, 1)):
        d[i, j] = d[j, i] = np.linalg.norm(p[i] - p[j])
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def diffusion_distance_matrix(g: Graph, t: float, binarize: bool = False) -> DistanceMatrix:
    """Euclidean distances between heat-kernel rows at time ``t``."""
    k = heat_kernel(g, t, binarize=binarize)
    return DistanceMatrix(_row_distances(k.values), g.labels, g.labels,
                          "diffusion", float(t), True)


def average_diffusion_distance(g: Graph, ts: Iterable[float],
                               binarize: bool = False) -> DistanceMatrix:
    """Entrywise mean of diffusion distance matrices over the times ``ts``."""
    ts = tuple(float(t) for t in ts)
    if not ts:
        raise ValueError("need at least one diffusion time")
    total = np.zeros((g.n_nodes, g.n_nodes))
    for t in ts:
        total += diffusion_distance_matrix(g, t, binarize).values
    return DistanceMatrix(total / len(ts), g.labels, g.labels, "avg-diffusion", ts, True)


def distance_matrix_from_array(values, labels: Sequence[str] | None = None,
                               metric: str = "custom",
                               col_labels: Sequence[str] | None = None) -> DistanceMatrix:
    values = np.asarray(values, dtype=float)
    rows = tuple(labels) if labels is not None else tuple(str(i) for i in range(values.shape[0]))
    cols = tuple(col_labels) if col_labels is not None else (
        rows if values.shape[0] == values.shape[1] else
        tuple(str(j) for j in range(values.shape[1])))
    sym = values.shape[0] == values.shape[1] and rows == cols and np.allclose(
        values, values.T, rtol=0, atol=1e-12)
    if sym:
        values = 0.5 * (values + values.T)
    return DistanceMatrix(values, rows, cols, metric, None, bool(sym))


METRIC_KINDS = ("sp", "sp-out", "sp-in", "diffusion", "avg-diffusion")


@dataclass(frozen=True)
class MetricSpec:
    """Which node distance to compute, and how edge weights enter it.

    ``weight_transform`` converts weights to lengths for the geodesic
    metrics; ``binarize`` drops weights from the random-walk Laplacian.
    ``ts`` is the time set averaged by ``avg-diffusion``.
    """

    kind: str = "sp"
    weight_transform: str = "unit"
    binarize: bool = False
    ts: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise ValueError(f"unknown metric {self.kind!r}; expected one of {METRIC_KINDS}")
        if self.kind == "avg-diffusion" and not self.ts:
            raise ValueError("avg-diffusion needs a set of times")
        object.__setattr__(self, "ts", tuple(float(t) for t in self.ts))

    @property
    def uses_t(self) -> bool:
        return self.kind == "diffusion"


def compute_distance(g: Graph, spec: MetricSpec, t: float | None = None) -> DistanceMatrix:
    """Distance matrix for ``spec``; ``t`` is required by ``diffusion`` only."""
    from .graph import apply_weight_transform

    if spec.kind in ("sp", "sp-out", "sp-in"):
        lengths = apply_weight_transform(g, spec.weight_transform)
        direction = {"sp": "undirected", "sp-out": "out", "sp-in": "in"}[spec.kind]
        if not g.directed and direction != "undirected":
            direction = "undirected"
        return shortest_path_matrix(lengths, direction)
    if spec.kind == "diffusion":
        if t is None:
            raise ValueError("diffusion distance needs a time t")
        return diffusion_distance_matrix(g, t, spec.binarize)
    return average_diffusion_distance(g, spec.ts, spec.binarize)
