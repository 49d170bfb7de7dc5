"""Reference centralities: degree, eigenvector, closeness, betweenness,
distance-weighted fragmentation and node polarity."""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .graph import Graph, GraphError, apply_weight_transform, is_connected
from .metrics import shortest_path_matrix


@dataclass(frozen=True, eq=False)
class CentralityVector:
    measure: str
    values: np.ndarray
    labels: tuple[str, ...]
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.values) != len(self.labels):
            raise ValueError("values and labels differ in length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"{self.measure}: non-finite centrality values")


def degree_centrality(g: Graph, mode: str = "total", use_weights: bool = False) -> CentralityVector:
    """Degree or strength; ``mode`` selects in/out/total for directed graphs."""
    if mode not in ("total", "in", "out"):
        raise ValueError(f"unknown degree mode {mode!r}")
    a = g.adjacency(weights=use_weights)
    if not g.directed:
        vals = a.sum(axis=1)
    elif mode == "out":
        vals = a.sum(axis=1)
    elif mode == "in":
        vals = a.sum(axis=0)
    else:
        vals = a.sum(axis=0) + a.sum(axis=1)
    return CentralityVector("degree", vals, g.labels, {"mode": mode, "weights": use_weights})


def eigenvector_centrality(g: Graph, tol: float = 1e-13, max_iter: int = 100_000,
                           use_weights: bool = True) -> CentralityVector:
    """Perron vector of the adjacency matrix by power iteration.

    Iterates on ``M + I`` (same eigenvectors, no oscillation on bipartite
    graphs) where ``M = A`` for undirected graphs and ``A^T`` for directed
    ones, so that score flows along in-edges. The result is L2-normalized
    and nonnegative. ``options`` records ``eigenvalue`` and ``converged``.
    """
    if not is_connected(g):
        raise GraphError("eigenvector centrality requires a connected graph")
    a = g.adjacency(weights=use_weights)
    m = a.T if g.directed else a
    n = g.n_nodes
    x = np.full(n, 1.0 / np.sqrt(n))
    converged = False
    for it in range(1, max_iter + 1):
        y = m @ x + x
        y /= np.linalg.norm(y)
        delta = np.max(np.abs(y - x))
        x = y
        if delta < tol:
            converged = True
            break
    lam = float(x @ (m @ x))
    if x.sum() < 0:
        x = -x
    np.clip(x, 0.0, None, out=x)
    return CentralityVector("eigenvector", x, g.labels,
                            {"eigenvalue": lam, "converged": converged, "iterations": it,
                             "weights": use_weights})


def closeness_centrality(g: Graph, normalized: bool = False,
                         weight_transform: str = "unit") -> CentralityVector:
    """Inverse total shortest-path distance to all other nodes.

    With ``normalized`` the total is first divided by ``n - 1``. Directed
    graphs use out-going distances.
    """
    lengths = apply_weight_transform(g, weight_transform)
    d = shortest_path_matrix(lengths, "out" if g.directed else "undirected").values
    total = d.sum(axis=1)
    if normalized:
        total = total / (g.n_nodes - 1)
    return CentralityVector("closeness", 1.0 / total, g.labels,
                            {"normalized": normalized, "weight_transform": weight_transform})


def _sssp_counts(nbrs, s: int, weighted: bool):
    """Single-source shortest paths: visit order, path counts and predecessors."""
    n = len(nbrs)
    sigma = np.zeros(n)
    sigma[s] = 1.0
    preds: list[list[int]] = [[] for _ in range(n)]
    order: list[int] = []
    if not weighted:
        dist = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            for w, _ in nbrs[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        return order, sigma, preds
    dist = np.full(n, np.inf)
    dist[s] = 0.0
    done = np.zeros(n, dtype=bool)
    heap = [(0.0, s, s)]
    while heap:
        dv, pred, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        for w, length in nbrs[v]:
            alt = dv + length
            if alt < dist[w]:
                dist[w] = alt
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (alt, v, w))
            elif alt == dist[w] and not done[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, sigma, preds


def betweenness_centrality(g: Graph, weight_transform: str = "unit") -> CentralityVector:
    """Brandes' accumulation of pair dependencies.

    Each pair contributes ``sigma_st(v) / sigma_st`` to every intermediate
    node; endpoints receive nothing. Undirected graphs count each unordered
    pair once. Disconnected pairs contribute zero.
    """
    lengths = apply_weight_transform(g, weight_transform)
    weighted = not np.all(lengths.weight == 1.0)
    nbrs = lengths.neighbors()
    n = g.n_nodes
    bc = np.zeros(n)
    for s in range(n):
        order, sigma, preds = _sssp_counts(nbrs, s, weighted)
        delta = np.zeros(n)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    if not g.directed:
        bc /= 2.0
    return CentralityVector("betweenness", bc, g.labels,
                            {"weight_transform": weight_transform})


def df_fragmentation(g: Graph, weight_transform: str = "unit") -> CentralityVector:
    """Distance-weighted fragmentation after removing each node in turn.

    ``DF(i) = 1 - sum_{j != k} 1 / d(j, k) / ((n - 1)(n - 2))`` over ordered
    pairs of the remaining nodes, with ``1 / inf = 0``.
    """
    n = g.n_nodes
    if n < 3:
        raise GraphError("fragmentation needs at least three nodes")
    lengths = apply_weight_transform(g, weight_transform)
    adj = lengths.sparse_adjacency().tolil()
    out = np.empty(n)
    pairs = (n - 1) * (n - 2)
    keep_all = np.arange(n)
    for i in range(n):
        keep = keep_all[keep_all != i]
        sub = adj[keep][:, keep].tocsr()
        d = dijkstra(sub, directed=g.directed)
        np.fill_diagonal(d, np.inf)
        out[i] = 1.0 - float((1.0 / d).sum()) / pairs
    return CentralityVector("fragmentation", out, g.labels,
                            {"weight_transform": weight_transform})


def node_polarity(g: Graph) -> CentralityVector:
    """In-strength minus out-strength: positive for receivers, negative for senders."""
    if not g.directed:
        raise GraphError("node polarity is defined for directed graphs only")
    a = g.adjacency(weights=True)
    return CentralityVector("polarity", a.sum(axis=0) - a.sum(axis=1), g.labels)


MEASURES = {
    "degree": degree_centrality,
    "eigenvector": eigenvector_centrality,
    "closeness": closeness_centrality,
    "betweenness": betweenness_centrality,
    "fragmentation": df_fragmentation,
    "polarity": node_polarity,
}


def compute(g: Graph, measure: str, **opts) -> CentralityVector:
    try:
        fn = MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown measure {measure!r}; choose from {sorted(MEASURES)}") from None
    return fn(g, **opts)
