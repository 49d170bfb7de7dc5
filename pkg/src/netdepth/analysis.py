"""Rank correlation between centrality and depth vectors."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    names: tuple[str, ...]
    r_s: np.ndarray
    p_values: np.ndarray
    alpha: float

    @property
    def significant(self) -> np.ndarray:
        return self.p_values < self.alpha


def _ranks(v: np.ndarray) -> np.ndarray:
    return stats.rankdata(v, method="average")


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    r = float(a @ b / np.sqrt((a @ a) * (b @ b)))
    return max(-1.0, min(1.0, r))


def _exact_p(ra: np.ndarray, rb: np.ndarray, r: float) -> float:
    hits = total = 0
    for perm in itertools.permutations(rb):
        total += 1
        if abs(_pearson(ra, np.asarray(perm))) >= abs(r) - 1e-12:
            hits += 1
    return hits / total


def spearman(v1: Sequence[float], v2: Sequence[float], exact: bool = False) -> tuple[float, float]:
    """Spearman's r_s with a two-sided p-value.

    Ties get average ranks. The p-value uses the t approximation on
    ``n - 2`` degrees of freedom; ``exact=True`` enumerates all rank
    permutations instead (only for ``n < 10``). ``|r_s| = 1`` gives ``p = 0``
    under the t approximation.
    """
    a = np.asarray(v1, dtype=float)
    b = np.asarray(v2, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("vectors must be 1-D and of equal length")
    n = a.size
    if n < 4:
        raise ValueError("need at least 4 observations")
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        raise ValueError("correlation is undefined for a constant vector")
    ra, rb = _ranks(a), _ranks(b)
    r = _pearson(ra, rb)
    if exact:
        if n >= 10:
            raise ValueError("exact permutation p-value is limited to n < 10")
        return r, _exact_p(ra, rb, r)
    if abs(r) >= 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return r, float(2.0 * stats.t.sf(abs(t), n - 2))


def _as_named(vectors) -> list[tuple[str, tuple[str, ...], np.ndarray]]:
    if isinstance(vectors, Mapping):
        items = list(vectors.items())
    else:
        items = []
        for k, v in enumerate(vectors):
            if isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], str):
                items.append(v)
            else:
                items.append((_default_name(v, k), v))
    out = []
    for name, v in items:
        if isinstance(v, tuple) and len(v) == 2:
            labels, values = v
        else:
            labels, values = v.labels, v.values
        out.append((name, tuple(labels), np.asarray(values, dtype=float)))
    return out


def _default_name(v, k: int) -> str:
    if hasattr(v, "measure"):
        return v.measure
    params = getattr(v, "params", None) or {}
    if params:
        bits = [f"ptd({params.get('metric', '?')}"]
        if params.get("t") is not None:
            bits.append(f"t={params['t']:g}")
        if params.get("p") is not None:
            bits.append(f"p={params['p']}")
        return ";".join(bits) + ")"
    return f"v{k}"


def align(vectors) -> tuple[tuple[str, ...], list[tuple[str, np.ndarray]]]:
    """Reorder every vector to the node order of the first one."""
    named = _as_named(vectors)
    if len(named) < 2:
        raise ValueError("need at least two vectors")
    ref_labels = named[0][1]
    ref = set(ref_labels)
    aligned = []
    for name, labels, values in named:
        got = set(labels)
        if got != ref or len(labels) != len(ref_labels):
            missing = sorted(ref - got)
            extra = sorted(got - ref)
            raise AlignmentError(
                f"{name}: node set mismatch (missing {missing[:10]}, unexpected {extra[:10]})")
        pos = {lab: i for i, lab in enumerate(labels)}
        aligned.append((name, values[[pos[lab] for lab in ref_labels]]))
    return ref_labels, aligned


def correlation_matrix(vectors, alpha: float = 0.05, exact: bool = False) -> CorrelationMatrix:
    """Pairwise Spearman correlations and p-values over a common node set.

    ``vectors`` is a list of centrality/depth objects, ``(name, vector)``
    pairs or a name -> vector mapping.
    """
    _, aligned = align(vectors)
    m = len(aligned)
    r = np.eye(m)
    p = np.zeros((m, m))
    for i, j in itertools.combinations(range(m), 2):
        rij, pij = spearman(aligned[i][1], aligned[j][1], exact=exact)
        r[i, j] = r[j, i] = rij
        p[i, j] = p[j, i] = pij
    return CorrelationMatrix(tuple(name for name, _ in aligned), r, p, alpha)


def top_set(values: Sequence[float], top_fraction: float) -> set[int]:
    """Indices of the top ``ceil(fraction * n)`` values, ties at the cutoff included."""
    v = np.asarray(values, dtype=float)
    if not 0.0 < top_fraction <= 1.0:
        raise ValueError("top_fraction must lie in (0, 1]")
    k = max(1, math.ceil(round(top_fraction * v.size, 9)))
    cut = np.sort(v)[::-1][k - 1]
    return set(np.flatnonzero(v >= cut).tolist())


def _labelled(v):
    if hasattr(v, "labels"):
        return v
    arr = np.asarray(v, dtype=float)
    return tuple(str(i) for i in range(arr.size)), arr


def ranking_overlap(v1, v2, top_fraction: float) -> float:
    """Share of the top set of ``v1`` that is also in the top set of ``v2``.

    Plain sequences are taken to share the same node order.
    """
    _, aligned = align([("a", _labelled(v1)), ("b", _labelled(v2))])
    a = top_set(aligned[0][1], top_fraction)
    b = top_set(aligned[1][1], top_fraction)
    return len(a & b) / len(a)
