"""Input networks: parsing, normalization, components and edge-length semantics."""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, TextIO

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class GraphError(ValueError):
    """Raised for malformed or unusable network input."""


class WeightTransform(str, Enum):
    """How edge weights become edge lengths for path-based metrics."""

    IDENTITY = "identity"
    RECIPROCAL = "reciprocal"
    UNIT = "unit"


@dataclass(frozen=True)
class ParseStats:
    nodes: int
    edges: int
    dropped_self_loops: int
    merged_duplicates: int


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable node-labelled network.

    ``src``, ``dst`` and ``weight`` are parallel arrays; for undirected
    graphs every edge is stored once with ``src <= dst``.
    """

    labels: tuple[str, ...]
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    directed: bool = False
    weighted: bool = False
    metadata: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    stats: ParseStats | None = None

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise GraphError("node labels must be unique")
        src = np.asarray(self.src, dtype=np.intp)
        dst = np.asarray(self.dst, dtype=np.intp)
        w = np.asarray(self.weight, dtype=float)
        if not (src.shape == dst.shape == w.shape) or src.ndim != 1:
            raise GraphError("edge arrays must be 1-D and of equal length")
        if src.size:
            if src.min() < 0 or dst.min() < 0 or max(src.max(), dst.max()) >= n:
                raise GraphError("edge endpoint out of range")
            if np.any(src == dst):
                raise GraphError("self-loops are not allowed")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise GraphError("edge weights must be positive and finite")
            if not self.directed and np.any(src > dst):
                raise GraphError("undirected edges must satisfy src <= dst")
        for arr in (src, dst, w):
            arr.setflags(write=False)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return int(self.src.size)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def adjacency(self, weights: bool = True) -> np.ndarray:
        """Dense adjacency matrix; symmetric for undirected graphs."""
        n = self.n_nodes
        a = np.zeros((n, n))
        w = self.weight if weights else np.ones_like(self.weight)
        a[self.src, self.dst] = w
        if not self.directed:
            a[self.dst, self.src] = w
        return a

    def sparse_adjacency(self, weights: bool = True) -> csr_matrix:
        n = self.n_nodes
        w = self.weight if weights else np.ones_like(self.weight)
        if self.directed:
            return csr_matrix((w, (self.src, self.dst)), shape=(n, n))
        rows = np.concatenate([self.src, self.dst])
        cols = np.concatenate([self.dst, self.src])
        return csr_matrix((np.concatenate([w, w]), (rows, cols)), shape=(n, n))

    def neighbors(self) -> list[list[tuple[int, float]]]:
        """Out-neighbour lists ``[(target, weight), ...]`` per node."""
        out: list[list[tuple[int, float]]] = [[] for _ in range(self.n_nodes)]
        for s, d, w in zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()):
            out[s].append((d, w))
            if not self.directed:
                out[d].append((s, w))
        return out

    def subgraph(self, nodes: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on ``nodes`` (kept in ascending order) and the old→new map."""
        keep = sorted(set(int(i) for i in nodes))
        mapping = {old: new for new, old in enumerate(keep)}
        mask = np.array([s in mapping and d in mapping
                         for s, d in zip(self.src.tolist(), self.dst.tolist())], dtype=bool)
        remap = np.vectorize(mapping.__getitem__, otypes=[np.intp])
        src = remap(self.src[mask]) if mask.any() else np.empty(0, np.intp)
        dst = remap(self.dst[mask]) if mask.any() else np.empty(0, np.intp)
        labels = tuple(self.labels[i] for i in keep)
        meta = {lab: self.metadata[lab] for lab in labels if lab in self.metadata}
        g = Graph(labels, src, dst, self.weight[mask], self.directed, self.weighted, meta)
        return g, mapping

    def with_weights(self, weight: np.ndarray) -> "Graph":
        return Graph(self.labels, self.src, self.dst, weight, self.directed,
                     self.weighted, self.metadata)

    def with_metadata(self, metadata: Mapping[str, Mapping[str, str]]) -> "Graph":
        return Graph(self.labels, self.src, self.dst, self.weight, self.directed,
                     self.weighted, metadata, self.stats)


def _read_text(text: str | TextIO) -> str:
    return text if isinstance(text, str) else text.read()


def parse_edge_list(text: str | TextIO, directed: bool = False,
                    weighted: bool = False) -> Graph:
    """Parse a whitespace-separated ``src dst [weight]`` edge list.

    Lines starting with ``#`` or ``%`` are comments, except ``#! node <label>``
    directives (written by :func:`serialize_edge_list`) which intern a node
    without an edge. Duplicate edges are merged by summing their weights;
    self-loops are dropped. Parse counts are attached as ``graph.stats``.
    """
    index: dict[str, int] = {}

    def intern(label: str) -> int:
        if label not in index:
            index[label] = len(index)
        return index[label]

    merged: dict[tuple[int, int], float] = {}
    order: list[tuple[int, int]] = []
    loops = dups = 0
    seen_content = False
    for lineno, raw in enumerate(_read_text(text).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#!"):
            parts = line[2:].split()
            if len(parts) == 2 and parts[0] == "node":
                intern(parts[1])
                seen_content = True
            continue
        if line[0] in "#%":
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"line {lineno}: expected 'src dst [weight]', got {raw!r}")
        seen_content = True
        w = 1.0
        if len(parts) == 3 and weighted:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphError(f"line {lineno}: bad weight {parts[2]!r}") from None
            if not math.isfinite(w) or w <= 0:
                raise GraphError(f"line {lineno}: weight must be positive and finite, got {w}")
        s, d = intern(parts[0]), intern(parts[1])
        if s == d:
            loops += 1
            continue
        key = (s, d) if directed or s <= d else (d, s)
        if key in merged:
            dups += 1
            if weighted:
                merged[key] += w
        else:
            merged[key] = w
            order.append(key)
    if not seen_content:
        raise GraphError("empty edge list")
    order.sort()
    src = np.array([k[0] for k in order], dtype=np.intp)
    dst = np.array([k[1] for k in order], dtype=np.intp)
    w = np.array([merged[k] for k in order], dtype=float)
    labels = tuple(sorted(index, key=index.__getitem__))
    stats = ParseStats(len(labels), len(order), loops, dups)
    return Graph(labels, src, dst, w, directed, weighted, {}, stats)


def serialize_edge_list(g: Graph) -> str:
    """Write ``g`` in the normalized edge-list form accepted by :func:`parse_edge_list`."""
    buf = io.StringIO()
    buf.write(f"# nodes={g.n_nodes} edges={g.n_edges} "
              f"directed={str(g.directed).lower()} weighted={str(g.weighted).lower()}\n")
    for lab in g.labels:
        buf.write(f"#! node {lab}\n")
    for s, d, w in zip(g.src.tolist(), g.dst.tolist(), g.weight.tolist()):
        if g.weighted:
            buf.write(f"{g.labels[s]} {g.labels[d]} {w!r}\n")
        else:
            buf.write(f"{g.labels[s]} {g.labels[d]}\n")
    return buf.getvalue()


def read_graph(path, directed: bool = False, weighted: bool = False) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, directed=directed, weighted=weighted)


def parse_metadata(text: str | TextIO) -> dict[str, dict[str, str]]:
    """Read node metadata from CSV rows ``label,key,value`` (header optional)."""
    meta: dict[str, dict[str, str]] = defaultdict(dict)
    reader = csv.reader(io.StringIO(_read_text(text)))
    for lineno, row in enumerate(reader, start=1):
        if not row or row[0].startswith("#"):
            continue
        if len(row) != 3:
            raise GraphError(f"metadata line {lineno}: expected label,key,value")
        if lineno == 1 and row == ["label", "key", "value"]:
            continue
        meta[row[0]][row[1]] = row[2]
    return dict(meta)


def components(g: Graph) -> np.ndarray:
    """Weak component id per node."""
    _, comp = connected_components(g.sparse_adjacency(), directed=g.directed,
                                   connection="weak")
    return comp


def is_connected(g: Graph) -> bool:
    return g.n_nodes > 0 and np.unique(components(g)).size == 1


def largest_connected_component(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on the largest weakly connected component.

    Ties go to the component containing the smallest node index. Returns the
    subgraph and the map from old to new node indices.
    """
    if g.n_nodes == 0:
        raise GraphError("empty graph")
    comp = components(g)
    sizes = np.bincount(comp)
    best = sizes.max()
    # first node (lowest index) whose component has maximal size
    first = int(np.flatnonzero(sizes[comp] == best)[0])
    members = np.flatnonzero(comp == comp[first])
    sub, mapping = g.subgraph(members)
    return Graph(sub.labels, sub.src, sub.dst, sub.weight, sub.directed, sub.weighted,
                 sub.metadata, g.stats), mapping


def apply_weight_transform(g: Graph, transform: WeightTransform | str) -> Graph:
    """Replace edge weights by edge lengths; topology is unchanged."""
    transform = WeightTransform(transform)
    if transform is WeightTransform.IDENTITY:
        lengths = g.weight.copy()
    elif transform is WeightTransform.RECIPROCAL:
        lengths = 1.0 / g.weight
    else:
        lengths = np.ones_like(g.weight)
    return g.with_weights(lengths)


def from_edges(labels: Iterable[str], edges: Iterable[tuple], directed: bool = False,
               weighted: bool | None = None) -> Graph:
    """Build a graph from ``(u, v)`` or ``(u, v, w)`` label tuples.

    Convenience constructor that goes through the same normalization as the
    text parser.
    """
    edges = list(edges)
    if weighted is None:
        weighted = any(len(e) == 3 for e in edges)
    lines = [f"#! node {lab}" for lab in labels]
    lines += [" ".join(str(x) for x in e) for e in edges]
    return parse_edge_list("\n".join(lines), directed=directed, weighted=weighted)
