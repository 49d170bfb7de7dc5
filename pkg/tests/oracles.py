"""Independent reference implementations used only by the tests.

They are deliberately slow and literal so that they share no code path with
the library.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from netdepth import from_edges


def random_graph(rng, n, p_edge, directed=False, weights=None, connected=False):
    """Erdos-Renyi graph with labels ``"0".."n-1"``; ``weights=(lo, hi)`` draws integer weights.

    ``connected=True`` first lays down a random spanning tree.
    """
    edges = set()
    if connected:
        perm = rng.permutation(n)
        for k in range(1, n):
            a, b = int(perm[k]), int(perm[rng.integers(k)])
            edges.add((a, b) if directed or a < b else (b, a))
    for a in range(n):
        for b in range(n):
            if a == b or (not directed and b < a):
                continue
            if rng.random() < p_edge:
                edges.add((a, b))
    out = []
    for a, b in sorted(edges):
        if weights is None:
            out.append((str(a), str(b)))
        else:
            out.append((str(a), str(b), int(rng.integers(weights[0], weights[1] + 1))))
    return from_edges([str(i) for i in range(n)], out, directed=directed,
                      weighted=weights is not None)


def floyd_warshall(n, edges, directed=False):
    """All-pairs shortest path lengths from ``(i, j, length)`` triples."""
    d = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for i, j, w in edges:
        d[i][j] = min(d[i][j], w)
        if not directed:
            d[j][i] = min(d[j][i], w)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return np.array(d)


def ptd_counts_bruteforce(points):
    """Projected Tukey depth counts by explicit sign counting.

    Whitens the centred cloud with the spectral pseudo-inverse of the sample
    covariance, then for every query ``k`` and every data direction ``j``
    counts the points on each closed side of the hyperplane through ``z_k``
    orthogonal to ``z_j - z_k``.
    """
    x = np.asarray(points, dtype=float)
    n, p = x.shape
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (n - 1)
    lam, vec = np.linalg.eigh(cov)
    keep = lam > np.finfo(float).eps * max(n, p) * lam.max()
    z = xc @ vec[:, keep] / np.sqrt(lam[keep])
    counts = []
    for k in range(n):
        diffs = z - z[k]
        best = n
        for j in range(n):
            ys = diffs @ diffs[j]
            le = int(np.sum(ys <= 0))
            ge = int(np.sum(ys >= 0))
            best = min(best, le, ge)
        counts.append(best)
    return np.array(counts)


def halfspace_depth_2d(points, k):
    """Exact Tukey depth count of sample point ``k`` in the plane.

    The closed-halfplane count only changes when the boundary line passes
    through a sample point, so it is enough to probe one direction inside
    every open arc between consecutive critical angles.
    """
    pts = np.asarray(points, dtype=float)
    x = pts[k]
    rel = pts - x
    nonzero = np.any(rel != 0, axis=1)
    angles = []
    for r in rel[nonzero]:
        a = math.atan2(r[1], r[0])
        angles += [(a + math.pi / 2) % (2 * math.pi), (a - math.pi / 2) % (2 * math.pi)]
    if not angles:
        return len(pts)
    angles = sorted(set(angles))
    probes = [(a + b) / 2 for a, b in zip(angles, angles[1:])]
    probes.append((angles[-1] + angles[0] + 2 * math.pi) / 2)
    best = len(pts)
    for th in probes:
        u = np.array([math.cos(th), math.sin(th)])
        best = min(best, int(np.sum(rel @ u >= 0)))
    return best


def _all_geodesics(adj, s, t):
    """Every shortest s-t path in an unweighted graph, as node lists."""
    n = len(adj)
    dist = [-1] * n
    dist[s] = 0
    frontier = [s]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    if dist[t] < 0:
        return []
    paths = []

    def walk(path):
        v = path[-1]
        if v == t:
            paths.append(list(path))
            return
        for w in adj[v]:
            if dist[w] == dist[v] + 1 and dist[w] <= dist[t]:
                path.append(w)
                walk(path)
                path.pop()

    walk([s])
    return paths


def betweenness_enumeration(g):
    """Betweenness by listing every geodesic, in exact rational arithmetic."""
    n = g.n_nodes
    adj = [[] for _ in range(n)]
    for s, d in zip(g.src.tolist(), g.dst.tolist()):
        adj[s].append(d)
        if not g.directed:
            adj[d].append(s)
    bc = [Fraction(0)] * n
    pairs = (itertools.permutations(range(n), 2) if g.directed
             else itertools.combinations(range(n), 2))
    for s, t in pairs:
        paths = _all_geodesics(adj, s, t)
        if not paths:
            continue
        for v in range(n):
            if v in (s, t):
                continue
            hits = sum(1 for path in paths if v in path)
            bc[v] += Fraction(hits, len(paths))
    return bc


def stationary_by_power(p_matrix, iters=20000):
    """Stationary row vector of a stochastic matrix by lazy power iteration."""
    n = p_matrix.shape[0]
    lazy = 0.5 * (np.eye(n) + p_matrix)
    v = np.full(n, 1.0 / n)
    for _ in range(iters):
        v = v @ lazy
    return v / v.sum()


def expm_taylor(a, terms=60):
    """Truncated Taylor series of the matrix exponential (small norms only)."""
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


def rank_pearson(a, b):
    """Spearman's coefficient as the Pearson correlation of hand-computed average ranks."""
    def ranks(v):
        order = sorted(range(len(v)), key=lambda i: v[i])
        r = [0.0] * len(v)
        i = 0
        while i < len(order):
            j = i
            while j + 1 < len(order) and v[order[j + 1]] == v[order[i]]:
                j += 1
            avg = (i + j) / 2 + 1
            for k in range(i, j + 1):
                r[order[k]] = avg
            i = j + 1
        return r

    ra, rb = ranks(list(a)), ranks(list(b))
    ma, mb = sum(ra) / len(ra), sum(rb) / len(rb)
    num = sum((x - ma) * (y - mb) for x, y in zip(ra, rb))
    den = math.sqrt(sum((x - ma) ** 2 for x in ra) * sum((y - mb) ** 2 for y in rb))
    return num / den
