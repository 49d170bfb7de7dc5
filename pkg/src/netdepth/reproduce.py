"""Pinned configurations for the Karate Club and Euro-road case studies."""
from __future__ import annotations

import numpy as np

from .analysis import correlation_matrix
from .centrality import compute
from .datasets import JOHN_A, MR_HI, load_karate
from .depth import network_depth
from .embed import classical_mds, smacof
from .graph import Graph, largest_connected_component
from .metrics import MetricSpec, compute_distance

KARATE_SP_DIMS = tuple(range(3, 9))
KARATE_TIMES = tuple(float(t) for t in range(1, 21))
KARATE_CORR_TIMES = tuple(float(t) for t in range(2, 11))
KARATE_P = 3
CLASSIC_MEASURES = ("degree", "eigenvector", "closeness", "betweenness", "fragmentation")


def karate_sp_medians(g: Graph | None = None, method: str = "classical") -> dict[int, list[str]]:
    """Median nodes of the geodesic depth space for each dimension in 3..8."""
    g = g or load_karate()
    dp = network_depth(g, MetricSpec("sp"), KARATE_SP_DIMS, method=method)
    return {c.p: [g.labels[i] for i in c.depth.median()] for c in dp}


def karate_diffusion_pattern(g: Graph | None = None, ts=KARATE_TIMES, p: int = KARATE_P):
    """Depth pattern on weighted diffusion distances, ``p = 3``, SMACOF."""
    g = g or load_karate()
    return network_depth(g, MetricSpec("diffusion"), (p,), ts, method="smacof")


def karate_families(g: Graph | None = None):
    """Classic centralities plus the geodesic and diffusion depth families.

    Returns ``(vectors, sp_names, diff_names)`` with ``vectors`` a list of
    ``(name, vector)`` pairs ready for :func:`correlation_matrix`.
    """
    g = g or load_karate()
    vectors = [(m, compute(g, m)) for m in CLASSIC_MEASURES]
    sp = network_depth(g, MetricSpec("sp"), KARATE_SP_DIMS, method="smacof")
    diff = network_depth(g, MetricSpec("diffusion"), (KARATE_P,), KARATE_CORR_TIMES)
    sp_names = [f"ptd_sp_p{c.p}" for c in sp]
    diff_names = [f"ptd_diff_t{c.t:g}" for c in diff]
    vectors += [(name, c.depth) for name, c in zip(sp_names, sp)]
    vectors += [(name, c.depth) for name, c in zip(diff_names, diff)]
    return vectors, sp_names, diff_names


def block_summary(cm, sp_names, diff_names) -> dict:
    """Mean correlations inside the geodesic family, across families, and for closeness."""
    idx = {n: i for i, n in enumerate(cm.names)}
    s = [idx[n] for n in sp_names]
    d = [idx[n] for n in diff_names]
    r = cm.r_s
    within = float(np.mean([r[i, j] for a, i in enumerate(s) for j in s[a + 1:]]))
    cross = float(np.mean([r[i, j] for i in s for j in d]))
    c = idx["closeness"]
    return {"within_sp": within, "cross": cross,
            "closeness_sp": float(np.mean(r[c, s])), "closeness_diff": float(np.mean(r[c, d]))}


def karate_report() -> dict:
    g = load_karate()
    out: dict = {"sp_medians": karate_sp_medians(g)}
    dp = karate_diffusion_pattern(g)
    deep, r09 = {}, {}
    for c in dp:
        v = c.depth.values
        order = np.argsort(-v, kind="stable")
        deep[c.t] = [g.labels[i] for i in order[:2]]
        r09[c.t] = list(c.depth.region(0.9).labels)
    t1 = dp.cell(t=1.0).depth.values
    out.update({"deepest_pair": deep, "region_0.9": r09,
                "t1_range": (float(t1.min()), float(t1.max()))})
    vectors, sp_names, diff_names = karate_families(g)
    cm = correlation_matrix(vectors)
    out["blocks"] = block_summary(cm, sp_names, diff_names)
    out["labels"] = {"mr_hi": MR_HI, "john_a": JOHN_A}
    return out


def euroroad_report(g: Graph) -> dict:
    """Classical MDS at ``p = 3`` and SMACOF at ``p = 5`` on the largest component."""
    lcc, _ = largest_connected_component(g)
    d = compute_distance(lcc, MetricSpec("sp"))
    cl = classical_mds(d, 3)
    sm = smacof(d, 5)
    return {"nodes": lcc.n_nodes, "edges": lcc.n_edges,
            "classical_p3_explained_variance": cl.explained_variance,
            "smacof_p5_stress1": sm.stress1, "smacof_p5_converged": sm.converged}
