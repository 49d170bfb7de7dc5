"""Acceptance gate: every criterion runs at its stated tolerance.

Each test carries a ``criterion`` marker; ``conftest.py`` folds them into one
PASS/FAIL/SKIP line per criterion at the end of the session.
"""
import os
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform

from netdepth import (from_edges, load_karate, read_graph, MetricSpec, classical_mds,
                      depth_space, diffusion_distance_matrix, heat_kernel, network_depth,
                      permutation_test_stress, ptd_point, scatter, smacof)
from netdepth.analysis import correlation_matrix
from netdepth.centrality import (betweenness_centrality, closeness_centrality,
                                 degree_centrality, df_fragmentation, eigenvector_centrality)
from netdepth.datasets import JOHN_A, MR_HI
from netdepth.metrics import distance_matrix_from_array
from netdepth import reproduce
from oracles import (betweenness_enumeration, halfspace_depth_2d, ptd_counts_bruteforce,
                     random_graph)

criterion = pytest.mark.criterion
ROOT = Path(__file__).resolve().parents[1]


def detail(record_property, text):
    record_property("detail", text)


def _orthogonal(rng, p):
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    return q * np.sign(np.diag(r))


def well_conditioned_map(rng, p):
    return _orthogonal(rng, p) @ np.diag(rng.uniform(0.5, 2.0, p)) @ _orthogonal(rng, p)


# ---------------------------------------------------------------- 1

@criterion(1, "depth counts equal brute-force sign counting on 200 clouds, < 30 s")
def test_c1_bruteforce_equivalence(record_property):
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    mismatches = 0
    for k in range(200):
        p = int(rng.integers(1, 6))
        n = int(rng.integers(max(3, p + 2), 61))
        x = rng.standard_normal((n, p)) * rng.uniform(0.1, 10, p) + rng.uniform(-5, 5, p)
        if k % 10 == 9 and p > 1:
            # rank-deficient cloud: last coordinate a combination of the others
            x[:, -1] = x[:, :-1] @ rng.standard_normal(p - 1)
        ds = depth_space(x)
        ref = ptd_counts_bruteforce(x)
        mismatches += int(not np.array_equal(ds.counts, ref))
        assert np.array_equal(ds.values, ref / n)
    elapsed = time.perf_counter() - start
    detail(record_property, f"mismatching clouds {mismatches}/200, {elapsed:.1f} s")
    assert mismatches == 0
    assert elapsed < 30


# ---------------------------------------------------------------- 2

@criterion(2, "depth axioms: affine invariance, halfspace lower bound, decay away from centre")
def test_c2a_affine_invariance(record_property):
    rng = np.random.default_rng(2)
    for _ in range(50):
        p = int(rng.integers(2, 6))
        n = int(rng.integers(p + 3, 50))
        x = rng.standard_normal((n, p))
        a = well_conditioned_map(rng, p)
        b = rng.uniform(-10, 10, p)
        assert np.array_equal(depth_space(x).counts, depth_space(x @ a.T + b).counts)
    detail(record_property, "50 maps, counts identical")


@criterion(2, "depth axioms: affine invariance, halfspace lower bound, decay away from centre")
def test_c2b_halfspace_lower_bound(record_property):
    rng = np.random.default_rng(22)
    checked = 0
    for _ in range(100):
        n = int(rng.integers(5, 41))
        x = rng.standard_normal((n, 2)) @ well_conditioned_map(rng, 2)
        ptd = depth_space(x).counts
        for k in range(n):
            assert halfspace_depth_2d(x, k) <= ptd[k]
            checked += 1
    detail(record_property, f"{checked} sample points, halfspace depth <= PTD everywhere")


@criterion(2, "depth axioms: affine invariance, halfspace lower bound, decay away from centre")
def test_c2c_decay_from_centre(record_property):
    passes, trials = 0, 200
    for seed in range(trials):
        rng = np.random.default_rng(1000 + seed)
        p = int(rng.integers(2, 6))
        n = int(rng.integers(30, 120))
        cov_root = well_conditioned_map(rng, p)
        z = rng.standard_normal((n, p))
        if seed % 2:
            # multivariate t with 4 degrees of freedom: still elliptical, heavier tails
            z = z / np.sqrt(rng.chisquare(4, (n, 1)) / 4)
        x = z @ cov_root.T + rng.uniform(-3, 3, p)
        sc = scatter(x)
        mean = x.mean(axis=0)
        u = rng.standard_normal(p)
        u /= np.linalg.norm(u)
        sigma = np.sqrt(u @ np.cov(x.T) @ u)
        far = mean + 10 * sigma * u
        passes += ptd_point(mean, sc) >= ptd_point(far, sc)
    rate = passes / trials
    detail(record_property, f"pass rate {rate:.3f} over {trials} seeds")
    assert rate >= 0.95


# ---------------------------------------------------------------- 3

@criterion(3, "diffusion distance: closed form, semigroup, long-time collapse")
def test_c3_two_node_closed_form(record_property):
    g = from_edges("ab", [("a", "b")])
    worst = 0.0
    for t in (0.5, 1, 2, 5):
        d = diffusion_distance_matrix(g, t).values
        worst = max(worst, abs(d[0, 1] - np.sqrt(2) * np.exp(-2 * t)))
    detail(record_property, f"max error {worst:.1e}")
    assert worst <= 1e-10


@criterion(3, "diffusion distance: closed form, semigroup, long-time collapse")
def test_c3_semigroup(record_property):
    rng = np.random.default_rng(3)
    worst = 0.0
    for k in range(40):
        n = int(rng.integers(2, 41))
        g = random_graph(rng, n, float(rng.uniform(0.05, 0.5)), connected=True,
                         weights=(1, 5) if k % 2 else None)
        s, t = rng.uniform(0.1, 3, 2)
        lhs = heat_kernel(g, s + t).values
        rhs = heat_kernel(g, s).values @ heat_kernel(g, t).values
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    detail(record_property, f"max |H(s+t) - H(s)H(t)| = {worst:.1e}")
    assert worst <= 1e-8


@criterion(3, "diffusion distance: closed form, semigroup, long-time collapse")
def test_c3_long_time_collapse(record_property):
    rng = np.random.default_rng(33)
    worst = 0.0
    for k in range(30):
        n = int(rng.integers(2, 51))
        g = random_graph(rng, n, float(rng.uniform(0.05, 0.4)), connected=True,
                         weights=(1, 5) if k % 2 else None)
        worst = max(worst, float(diffusion_distance_matrix(g, 500).values.max()))
    detail(record_property, f"largest D_500 entry {worst:.1e}")
    assert worst < 1e-6


# ---------------------------------------------------------------- 4

def _monotone(history) -> bool:
    h = np.asarray(history)
    return bool(np.all(np.diff(h) <= 1e-10 * h[:-1] + 1e-14 * h[0]))


@criterion(4, "MDS: exact recovery, monotone SMACOF, permutation p-value floor")
def test_c4_classical_recovery(record_property):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(30):
        dim = int(rng.integers(1, 6))
        n = int(rng.integers(dim + 2, 60))
        x = rng.standard_normal((n, dim)) * rng.uniform(0.5, 5)
        d = distance_matrix_from_array(squareform(pdist(x)))
        e = classical_mds(d, dim)
        worst = max(worst, float(np.max(np.abs(squareform(pdist(e.config)) - d.values))))
    detail(record_property, f"max distance error {worst:.1e}")
    assert worst <= 1e-8


@criterion(4, "MDS: exact recovery, monotone SMACOF, permutation p-value floor")
def test_c4_smacof_monotone(record_property, karate):
    rng = np.random.default_rng(44)
    runs = []
    for _ in range(20):
        n = int(rng.integers(5, 40))
        x = rng.standard_normal((n, 3))
        d = squareform(pdist(x)) * np.exp(0.3 * squareform(rng.standard_normal(n * (n - 1) // 2)))
        runs.append(smacof(distance_matrix_from_array(d), int(rng.integers(1, 5))))
    for metric, t in (("sp", None), ("diffusion", 1.0), ("diffusion", 8.0)):
        from netdepth import compute_distance
        d = compute_distance(karate, MetricSpec(metric), t)
        runs += [smacof(d, p) for p in (2, 3, 5, 8)]
    bad = sum(not _monotone(e.stress_history) for e in runs)
    iters = sum(len(e.stress_history) for e in runs)
    detail(record_property, f"{len(runs)} runs, {iters} iterations, {bad} non-monotone")
    assert bad == 0


@criterion(4, "MDS: exact recovery, monotone SMACOF, permutation p-value floor")
def test_c4_permutation_floor(record_property):
    vals = []
    for seed, (n, dim, n_perm) in enumerate([(12, 2, 19), (15, 3, 49), (20, 2, 99)]):
        x = np.random.default_rng(40 + seed).standard_normal((n, dim))
        d = distance_matrix_from_array(squareform(pdist(x)))
        res = permutation_test_stress(d, dim, n_perm=n_perm, seed=seed)
        vals.append((res.p_value, 1 / (n_perm + 1)))
    detail(record_property, ", ".join(f"p={a:.4f} (floor {b:.4f})" for a, b in vals))
    assert all(a == b for a, b in vals)


# ---------------------------------------------------------------- 5

def _euroroad_path() -> Path | None:
    env = os.environ.get("NETDEPTH_EUROROAD")
    for cand in ([Path(env)] if env else []) + [ROOT / "data" / "euroroad.txt"]:
        if cand.is_file():
            return cand
    return None


@criterion(5, "Euro-road: explained variance 0.749 +- 0.02 at p=3, stress-1 0.038 +- 0.010 at p=5")
def test_c5_euroroad(record_property):
    path = _euroroad_path()
    if path is None:
        pytest.skip("Euro-road edge list not present; run scripts/fetch_euroroad.sh "
                    "or set NETDEPTH_EUROROAD")
    start = time.perf_counter()
    rep = reproduce.euroroad_report(read_graph(path))
    elapsed = time.perf_counter() - start
    detail(record_property, f"N={rep['nodes']}, explained variance "
           f"{rep['classical_p3_explained_variance']:.4f}, stress-1 "
           f"{rep['smacof_p5_stress1']:.4f}, {elapsed:.0f} s")
    assert abs(rep["classical_p3_explained_variance"] - 0.749) <= 0.02
    assert abs(rep["smacof_p5_stress1"] - 0.038) <= 0.010
    assert elapsed < 300


# ---------------------------------------------------------------- 6

@criterion(6, "Karate: geodesic median, diffusion deepest pair and regions, t=1 range, < 1 min")
def test_c6_karate(record_property):
    start = time.perf_counter()
    g = load_karate()
    lab = {MR_HI, JOHN_A}

    medians = reproduce.karate_sp_medians(g)
    detail(record_property, "geodesic medians (classical) " +
           ", ".join(f"p{p}:{'/'.join(m)}" for p, m in medians.items()))
    assert all(m == [MR_HI] for m in medians.values())

    dp = reproduce.karate_diffusion_pattern(g)
    assert all(c.ok for c in dp.cells.values())
    for t in (1.0, 2.0, 3.0, 4.0):
        v = dp.cell(t=t).depth.values
        second = np.sort(v)[-2]
        idx = [g.labels.index(x) for x in lab]
        # tie-inclusive: both actors reach the two largest depth values
        assert all(v[i] >= second for i in idx), f"t={t:g}"
    late = [t for t in dp.ts if t >= 7]
    for t in late:
        members = set(dp.cell(t=t).depth.region(0.9).labels)
        assert {"20", "33"} <= members, f"t={t:g}"
    early = [t for t in dp.ts if t <= 4 and "20" in dp.cell(t=t).depth.region(0.9).labels]
    assert not early

    v1 = dp.cell(t=1.0).depth.values
    n = g.n_nodes
    detail(record_property, f"t=1 depth range [{round(v1.min() * n)}/{n}, {round(v1.max() * n)}/{n}]")
    assert v1.min() >= 1 / n - 1e-12 and v1.max() <= 6 / n + 1e-12
    elapsed = time.perf_counter() - start
    detail(record_property, f"{elapsed:.1f} s")
    assert elapsed < 60


# ---------------------------------------------------------------- 7

@criterion(7, "centralities: betweenness by enumeration, hand values, eigenvector residual")
def test_c7_betweenness_enumeration(record_property):
    rng = np.random.default_rng(7)
    worst = Fraction(0)
    for k in range(100):
        n = int(rng.integers(2, 13))
        g = random_graph(rng, n, float(rng.uniform(0.1, 0.7)), directed=bool(k % 3 == 0))
        bc = betweenness_centrality(g).values
        for got, ref in zip(bc, betweenness_enumeration(g)):
            err = abs(Fraction(float(got)) - ref)
            worst = max(worst, err / max(ref, Fraction(1)))
    detail(record_property, f"max relative error vs rational enumeration {float(worst):.1e}")
    assert worst <= Fraction(1, 10 ** 12)


@criterion(7, "centralities: betweenness by enumeration, hand values, eigenvector residual")
def test_c7_hand_values():
    path = from_edges("abc", [("a", "b"), ("b", "c")])
    star = from_edges("hwxyz", [("h", leaf) for leaf in "wxyz"])
    cycle = from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    assert degree_centrality(star).values.tolist() == [4, 1, 1, 1, 1]
    assert closeness_centrality(path).values.tolist() == [1 / 3, 1 / 2, 1 / 3]
    assert closeness_centrality(path, normalized=True).values[1] == 1.0
    assert df_fragmentation(path).values.tolist() == [0.0, 1.0, 0.0]
    assert df_fragmentation(cycle).values.tolist() == [1 - 5 / 6] * 4
    assert betweenness_centrality(star).values.tolist() == [6, 0, 0, 0, 0]
    assert betweenness_centrality(cycle).values.tolist() == [0.5] * 4


@criterion(7, "centralities: betweenness by enumeration, hand values, eigenvector residual")
def test_c7_eigenvector_residual(record_property, karate):
    rng = np.random.default_rng(77)
    graphs = [karate] + [random_graph(rng, int(rng.integers(3, 40)), 0.2, connected=True,
                                      weights=(1, 4) if k % 2 else None) for k in range(20)]
    worst = 0.0
    for g in graphs:
        x = eigenvector_centrality(g)
        a = g.adjacency()
        lam = x.options["eigenvalue"]
        worst = max(worst, float(np.linalg.norm(a @ x.values - lam * x.values)))
    detail(record_property, f"max residual {worst:.1e} over {len(graphs)} graphs")
    assert worst <= 1e-8


# ---------------------------------------------------------------- 8

@criterion(8, "Karate correlations: geodesic depth family is a block; closeness sides with it")
def test_c8_block_structure(record_property):
    vectors, sp, diff = reproduce.karate_families()
    cm = correlation_matrix(vectors)
    b = reproduce.block_summary(cm, sp, diff)
    detail(record_property, ", ".join(f"{k}={v:.3f}" for k, v in b.items()))
    assert b["within_sp"] > b["cross"]
    assert b["closeness_sp"] > b["closeness_diff"]


# ---------------------------------------------------------------- 9

@criterion(9, "performance: n=500 p=10 depth space < 10 s; Karate 20x29 sweep < 60 s")
def test_c9_depth_space_speed(record_property, monkeypatch):
    monkeypatch.setenv("NETDEPTH_THREADS", "1")
    x = np.random.default_rng(9).standard_normal((500, 10))
    start = time.perf_counter()
    ds = depth_space(x)
    elapsed = time.perf_counter() - start
    detail(record_property, f"{elapsed:.2f} s")
    assert ds.n == 500
    assert elapsed < 10


@criterion(9, "performance: n=500 p=10 depth space < 10 s; Karate 20x29 sweep < 60 s")
def test_c9_karate_sweep_speed(record_property, karate):
    start = time.perf_counter()
    dp = network_depth(karate, "diffusion", range(2, 31), [float(t) for t in range(1, 21)],
                       threads=1)
    elapsed = time.perf_counter() - start
    failed = sum(not c.ok for c in dp.cells.values())
    detail(record_property, f"{len(dp.cells)} cells, {failed} failed, {elapsed:.1f} s")
    assert len(dp.cells) == 580
    assert elapsed < 60
