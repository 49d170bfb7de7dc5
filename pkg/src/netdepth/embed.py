"""Multidimensional scaling of distance matrices.

All stress sums run over unordered pairs ``i < j`` for symmetric input and
over every (row, column) pair for unfolding. ``raw_stress`` is the plain
sum of squared residuals; ``stress1`` is Kruskal's normalized form
``sqrt(raw_stress / sum d_ij(X)^2)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import isotonic_regression
from scipy.spatial.distance import cdist, pdist, squareform

from .metrics import DistanceMatrix

log = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 1000
DEFAULT_EPS = 1e-6
# allowed stress increase between Guttman steps, relative; roundoff only
_MONOTONE_SLACK = 1e-10
# raw stress below this fraction of sum(delta^2) counts as an exact fit
_EXACT_FIT = 1e-24


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Embedding:
    """Point configuration plus fit diagnostics.

    For unfolding, ``col_config`` holds the partner point set, so that
    ``cdist(config, col_config)`` reproduces the fitted dissimilarities.
    """

    config: np.ndarray
    method: str
    labels: tuple[str, ...]
    raw_stress: float
    stress1: float
    per_point_stress: np.ndarray
    iterations: int = 0
    converged: bool = True
    explained_variance: float | None = None
    stress_history: tuple[float, ...] = ()
    padded: bool = False
    col_config: np.ndarray | None = None
    disparities: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.config.shape[1]

    @property
    def n(self) -> int:
        return self.config.shape[0]

    def diagnostics(self) -> dict:
        return {
            "method": self.method,
            "p": self.p,
            "t": self.meta.get("t"),
            "raw_stress": float(self.raw_stress),
            "stress1": float(self.stress1),
            "explained_variance": (None if self.explained_variance is None
                                   else float(self.explained_variance)),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
        }


class StressReport(NamedTuple):
    raw_stress: float
    stress1: float
    per_point_stress: np.ndarray


class PermutationTest(NamedTuple):
    p_value: float
    observed: float
    null: np.ndarray


def _stress1(raw: float, dsq: float) -> float:
    if raw <= 0:
        return 0.0
    if dsq <= 0:
        return 1.0
    return float(min(1.0, np.sqrt(raw / dsq)))


def _symmetric_stress(delta: np.ndarray, x: np.ndarray) -> StressReport:
    d = squareform(pdist(x))
    r2 = (delta - d) ** 2
    np.fill_diagonal(r2, 0.0)
    raw = float(np.triu(r2, 1).sum())
    dsq = float(np.triu(d * d, 1).sum())
    # each unordered pair is shared by its two endpoints
    per_point = 0.5 * r2.sum(axis=1)
    return StressReport(raw, _stress1(raw, dsq), per_point)


def _rect_stress(delta: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> StressReport:
    d = cdist(rows, cols)
    r2 = (delta - d) ** 2
    raw = float(r2.sum())
    return StressReport(raw, _stress1(raw, float((d * d).sum())), r2.sum(axis=1))


def stress_report(e: Embedding, d: DistanceMatrix) -> StressReport:
    """Recompute raw stress, stress-1 and per-point stress from a configuration."""
    delta = d.values
    if e.method == "unfold-rows":
        return _rect_stress(delta, e.config, e.col_config)
    if e.method == "unfold-cols":
        return _rect_stress(delta.T, e.config, e.col_config)
    if delta.shape != (e.n, e.n):
        raise EmbeddingError("embedding and distance matrix sizes differ")
    target = e.disparities if e.disparities is not None else delta
    return _symmetric_stress(target, e.config)


def _check_square(d: DistanceMatrix, p: int) -> np.ndarray:
    if not d.symmetric:
        raise EmbeddingError("a symmetric distance matrix is required; use unfold()")
    n = d.shape[0]
    if not 1 <= p <= n - 1:
        raise EmbeddingError(f"dimension p={p} outside [1, {n - 1}]")
    return d.values


def _torgerson(delta: np.ndarray, p: int):
    n = delta.shape[0]
    j = np.eye(n) - 1.0 / n
    b = -0.5 * j @ (delta ** 2) @ j
    lam, vec = np.linalg.eigh(0.5 * (b + b.T))
    order = np.argsort(lam)[::-1]
    lam, vec = lam[order], vec[:, order]
    tol = np.finfo(float).eps * n * max(1.0, np.abs(lam).max())
    pos = lam > tol
    if not pos.any():
        raise EmbeddingError("double-centered matrix has no positive eigenvalue")
    k = min(p, int(pos.sum()))
    x = np.zeros((n, p))
    x[:, :k] = vec[:, :k] * np.sqrt(lam[:k])
    # deterministic orientation: largest-magnitude coordinate of each axis positive
    for c in range(k):
        if x[np.argmax(np.abs(x[:, c])), c] < 0:
            x[:, c] = -x[:, c]
    explained = float(lam[:k].sum() / lam[pos].sum())
    return x, explained, k < p


def classical_mds(d: DistanceMatrix, p: int) -> Embedding:
    """Torgerson scaling: top-``p`` eigenpairs of the double-centered squared distances.

    When fewer than ``p`` eigenvalues are positive the configuration is
    padded with zero columns and ``padded`` is set.
    """
    delta = _check_square(d, p)
    x, explained, padded = _torgerson(delta, p)
    rep = _symmetric_stress(delta, x)
    return Embedding(x, "classical", d.row_labels, rep.raw_stress, rep.stress1,
                     rep.per_point_stress, 0, True, explained, (rep.raw_stress,),
                     padded, meta={"t": d.t})


def _initial_config(delta: np.ndarray, p: int, init, seed) -> np.ndarray:
    n = delta.shape[0]
    if isinstance(init, np.ndarray):
        if init.shape != (n, p):
            raise EmbeddingError(f"init shape {init.shape} != {(n, p)}")
        return np.array(init, dtype=float)
    if init in (None, "classical"):
        x, _, padded = _torgerson(delta, p)
        if padded:
            # Guttman steps never leave an all-zero axis; give empty axes a small seeded nudge
            rng = np.random.default_rng(0 if seed is None else seed)
            empty = ~np.any(x, axis=0)
            scale = 1e-3 * (np.sqrt(np.mean(x[:, ~empty] ** 2)) or 1.0)
            x[:, empty] = scale * rng.standard_normal((n, int(empty.sum())))
        return x
    if init == "random":
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((n, p))
        x -= x.mean(axis=0)
        scale = np.sqrt(np.mean(delta[np.triu_indices(n, 1)] ** 2))
        return x * scale / max(np.sqrt(np.mean(pdist(x) ** 2)), 1e-300)
    raise EmbeddingError(f"unknown init {init!r}")


def _guttman(x: np.ndarray, target: np.ndarray, d: np.ndarray | None = None) -> np.ndarray:
    """One majorization step with unit weights: ``X <- B(X) X / n``.

    ``d`` may pass in the current distance matrix of ``x``.
    """
    n = x.shape[0]
    if d is None:
        d = squareform(pdist(x))
    with np.errstate(divide="ignore", invalid="ignore"):
        b = np.where(d > 0, target / d, 0.0)
    np.negative(b, out=b)
    b[np.diag_indices(n)] = 0.0
    b[np.diag_indices(n)] = -b.sum(axis=1)
    return b @ x / n


def _raw_full(target: np.ndarray, d: np.ndarray) -> float:
    # both matrices have zero diagonals, so the full sum counts each pair twice
    r = target - d
    return 0.5 * float(np.einsum("ij,ij->", r, r))


def _step(prev: float, s: float, norm: float, eps: float, it: int) -> bool:
    """Check one majorization step and report convergence.

    Raw stress may only grow by roundoff: a relative ``_MONOTONE_SLACK`` plus
    the absolute error of summing squared residuals of size ``sqrt(prev)``
    against distances of total size ``sqrt(norm)``.
    """
    tol = prev * _MONOTONE_SLACK + 8 * np.finfo(float).eps * np.sqrt(prev * norm)
    if s > prev + tol:
        raise EmbeddingError(f"stress increased at iteration {it}: {prev!r} -> {s!r}")
    return prev - s < eps * prev or s <= _EXACT_FIT * norm


def smacof(d: DistanceMatrix, p: int, max_iter: int = DEFAULT_MAX_ITER,
           eps: float = DEFAULT_EPS, init=None, seed: int | None = None) -> Embedding:
    """Metric MDS by iterated Guttman transforms.

    Starts from the classical solution unless ``init`` is ``"random"`` (seeded)
    or an explicit ``(n, p)`` array. Stops once the relative decrease of raw
    stress falls below ``eps``. A stress increase beyond roundoff raises
    ``EmbeddingError``: majorization forbids it.
    """
    delta = _check_square(d, p)
    if eps <= 0:
        raise EmbeddingError("eps must be positive")
    x = _initial_config(delta, p, init, seed)
    norm = float(np.triu(delta ** 2, 1).sum())
    dist = squareform(pdist(x))
    prev = _raw_full(delta, dist)
    history = [prev]
    converged = prev <= _EXACT_FIT * norm
    it = 0
    while not converged and it < max_iter:
        x = _guttman(x, delta, dist)
        it += 1
        if not np.all(np.isfinite(x)):
            raise EmbeddingError(f"non-finite configuration at iteration {it}")
        dist = squareform(pdist(x))
        s = _raw_full(delta, dist)
        converged = _step(prev, s, norm, eps, it)
        history.append(s)
        prev = s
    rep = _symmetric_stress(delta, x)
    return Embedding(x, "smacof", d.row_labels, rep.raw_stress, rep.stress1,
                     rep.per_point_stress, it, bool(converged), None, tuple(history),
                     meta={"t": d.t})


def monotone_disparities(delta_u: np.ndarray, dist_u: np.ndarray) -> np.ndarray:
    """Least-squares monotone fit of distances to dissimilarity order.

    Kruskal's primary approach: within blocks of tied dissimilarities the
    order is free, so ties are broken by the current distances before the
    pool-adjacent-violators pass.
    """
    order = np.lexsort((dist_u, delta_u))
    fit = isotonic_regression(dist_u[order]).x
    out = np.empty_like(fit)
    out[order] = fit
    return out


def nonmetric_smacof(d: DistanceMatrix, p: int, max_iter: int = DEFAULT_MAX_ITER,
                     eps: float = DEFAULT_EPS, init=None,
                     seed: int | None = None) -> Embedding:
    """Ordinal MDS: alternate monotone regression and Guttman steps.

    Disparities are rescaled to the sum of squares of the input after every
    regression, which fixes the overall scale. Convergence is judged on
    stress-1 against the current disparities.
    """
    delta = _check_square(d, p)
    n = delta.shape[0]
    iu = np.triu_indices(n, 1)
    delta_u = delta[iu]
    norm = float(np.sum(delta_u ** 2))
    if norm == 0:
        raise EmbeddingError("all dissimilarities are zero")
    x = _initial_config(delta, p, init, seed)

    def disparities(x):
        dist_u = pdist(x)
        dhat = monotone_disparities(delta_u, dist_u)
        ss = float(np.sum(dhat ** 2))
        dhat = dhat * np.sqrt(norm / ss) if ss > 0 else delta_u.copy()
        full = np.zeros((n, n))
        full[iu] = dhat
        return full + full.T, dist_u

    target, dist_u = disparities(x)
    prev = _stress1(float(np.sum((target[iu] - dist_u) ** 2)), float(np.sum(dist_u ** 2)))
    history = [prev]
    converged = prev == 0.0
    it = 0
    while not converged and it < max_iter:
        x = _guttman(x, target)
        it += 1
        if not np.all(np.isfinite(x)):
            raise EmbeddingError(f"non-finite configuration at iteration {it}")
        target, dist_u = disparities(x)
        s = _stress1(float(np.sum((target[iu] - dist_u) ** 2)), float(np.sum(dist_u ** 2)))
        history.append(s)
        converged = abs(prev - s) < eps * max(prev, 1e-300) or s == 0.0
        prev = s
    rep = _symmetric_stress(target, x)
    return Embedding(x, "nonmetric", d.row_labels, rep.raw_stress, rep.stress1,
                     rep.per_point_stress, it, bool(converged), None, tuple(history),
                     disparities=target, meta={"t": d.t})


def unfold(d: DistanceMatrix, p: int, max_iter: int = DEFAULT_MAX_ITER,
           eps: float = DEFAULT_EPS, init=None,
           seed: int | None = None) -> tuple[Embedding, Embedding]:
    """Place rows and columns of a (possibly asymmetric) dissimilarity matrix.

    Minimizes ``sum_ij (delta_ij - |R_i - C_j|)^2`` by weighted majorization
    on the joint configuration with zero weight inside each set. Square input
    starts from the classical solution of the symmetrized matrix, used for
    both sets; rectangular input starts from a seeded random configuration.
    Returns the row and column embeddings.
    """
    delta = d.values
    nr, nc = delta.shape
    if delta.size > 1 and np.ptp(delta) == 0:
        raise EmbeddingError("constant dissimilarity matrix cannot be unfolded")
    if p < 1:
        raise EmbeddingError("p must be at least 1")
    m = nr + nc
    w = np.zeros((m, m))
    w[:nr, nr:] = 1.0
    w[nr:, :nr] = 1.0
    v = np.diag(w.sum(axis=1)) - w
    vplus = np.linalg.pinv(v)
    full = np.zeros((m, m))
    full[:nr, nr:] = delta
    full[nr:, :nr] = delta.T

    if isinstance(init, np.ndarray):
        z = np.array(init, dtype=float)
    elif init in (None, "classical") and nr == nc and nr > p:
        sym = 0.5 * (delta + delta.T)
        np.fill_diagonal(sym, 0.0)
        x0 = _initial_config(sym, p, "classical", seed)
        z = np.vstack([x0, x0])
    else:
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((m, p)) * max(float(np.sqrt(np.mean(delta ** 2))), 1e-12)
    if z.shape != (m, p):
        raise EmbeddingError(f"init shape {z.shape} != {(m, p)}")

    def raw(z):
        return float(((delta - cdist(z[:nr], z[nr:])) ** 2).sum())

    norm = float((delta ** 2).sum())
    prev = raw(z)
    history = [prev]
    converged = prev <= _EXACT_FIT * norm
    it = 0
    while not converged and it < max_iter:
        dz = squareform(pdist(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            b = -np.where(dz > 0, w * full / dz, 0.0)
        np.fill_diagonal(b, 0.0)
        np.fill_diagonal(b, -b.sum(axis=1))
        z = vplus @ (b @ z)
        it += 1
        if not np.all(np.isfinite(z)):
            raise EmbeddingError(f"non-finite configuration at iteration {it}")
        s = raw(z)
        converged = _step(prev, s, norm, eps, it)
        history.append(s)
        prev = s
    rows, cols = z[:nr], z[nr:]
    rep_r = _rect_stress(delta, rows, cols)
    rep_c = _rect_stress(delta.T, cols, rows)
    common = dict(iterations=it, converged=bool(converged), stress_history=tuple(history),
                  meta={"t": d.t})
    er = Embedding(rows, "unfold-rows", d.row_labels, rep_r.raw_stress, rep_r.stress1,
                   rep_r.per_point_stress, col_config=cols, **common)
    ec = Embedding(cols, "unfold-cols", d.col_labels, rep_c.raw_stress, rep_c.stress1,
                   rep_c.per_point_stress, col_config=rows, **common)
    return er, ec


METHODS = ("classical", "smacof", "nonmetric")


def embed(d: DistanceMatrix, p: int, method: str = "smacof", **opts) -> Embedding:
    """Dispatch on ``method``; asymmetric input is always unfolded (row cloud returned)."""
    if not d.symmetric:
        return unfold(d, p, **opts)[0]
    if method == "classical":
        return classical_mds(d, p)
    if method == "smacof":
        return smacof(d, p, **opts)
    if method == "nonmetric":
        return nonmetric_smacof(d, p, **opts)
    raise EmbeddingError(f"unknown embedding method {method!r}")


def _permuted(delta: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n = delta.shape[0]
    iu = np.triu_indices(n, 1)
    vals = rng.permutation(delta[iu])
    out = np.zeros_like(delta)
    out[iu] = vals
    return out + out.T


def permutation_test_stress(d: DistanceMatrix, p: int, n_perm: int = 99, seed: int = 0,
                            method: str = "smacof", **opts) -> PermutationTest:
    """Compare the observed stress-1 with fits to shuffled dissimilarities.

    ``p_value = (1 + #{null <= observed}) / (n_perm + 1)``.
    """
    if n_perm < 19:
        raise EmbeddingError("n_perm must be at least 19")
    observed = embed(d, p, method, **opts).stress1
    rng = np.random.default_rng(seed)
    null = np.empty(n_perm)
    for k in range(n_perm):
        dp = DistanceMatrix(_permuted(d.values, rng), d.row_labels, d.col_labels,
                            d.metric, d.t, True)
        null[k] = embed(dp, p, method, **opts).stress1
    p_value = (1 + int(np.sum(null <= observed))) / (n_perm + 1)
    return PermutationTest(p_value, observed, null)



class ScreeRow(NamedTuple):
    t: float | None
    p: int
    stress1: float
    converged: bool
    error: str | None = None


def scree_surface(g, metric, ps, ts=None, method: str = "smacof", **opts) -> list[ScreeRow]:
    """Stress-1 over a ``(t, p)`` grid, rows in lexicographic ``(t, p)`` order.

    Cells that fail are reported with ``stress1 = nan`` and the error text.
    """
    from .metrics import MetricSpec, compute_distance

    spec = MetricSpec(metric) if isinstance(metric, str) else metric
    ps = [int(p) for p in ps]
    ts = [float(t) for t in ts] if spec.uses_t else [None]
    if not ps or not ts:
        raise EmbeddingError("empty scree grid")
    rows = []
    for t in ts:
        try:
            d = compute_distance(g, spec, t)
        except Exception as exc:  # noqa: BLE001
            rows += [ScreeRow(t, p, float("nan"), False, str(exc)) for p in ps]
            continue
        for p in ps:
            try:
                e = embed(d, p, method, **opts)
                rows.append(ScreeRow(t, p, e.stress1, e.converged))
            except Exception as exc:  # noqa: BLE001
                rows.append(ScreeRow(t, p, float("nan"), False, str(exc)))
    return rows
