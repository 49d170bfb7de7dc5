"""Text formats for distance matrices, embeddings, depths, centralities and correlations.

Floats are written with ``repr`` so that files round-trip exactly and reruns
are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .analysis import CorrelationMatrix
from .centrality import CentralityVector
from .depth import DepthPattern, DepthRegion, DepthSpace
from .embed import Embedding, ScreeRow
from .metrics import DistanceMatrix


def _num(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        return repr(x)
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _t_str(t) -> str:
    if t is None:
        return "none"
    if isinstance(t, (tuple, list)):
        return ",".join(_num(v) for v in t)
    return _num(t)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def _write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- distances

def distance_to_csv(d: DistanceMatrix) -> str:
    head = f"# metric={d.metric} t={_t_str(d.t)} symmetric={str(d.symmetric).lower()}\n"
    rows = [[""] + list(d.col_labels)]
    rows += [[lab] + [_num(v) for v in row] for lab, row in zip(d.row_labels, d.values)]
    return head + _csv_text(rows)


def distance_from_csv(text: str) -> DistanceMatrix:
    lines = text.splitlines()
    meta = {"metric": "custom", "t": "none", "symmetric": "true"}
    if lines and lines[0].startswith("#"):
        for tok in lines[0][1:].split():
            if "=" in tok:
                k, v = tok.split("=", 1)
                meta[k] = v
        lines = lines[1:]
    rows = list(csv.reader(lines))
    cols = tuple(rows[0][1:])
    labels = tuple(r[0] for r in rows[1:])
    values = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    t = None if meta["t"] == "none" else (
        tuple(float(v) for v in meta["t"].split(",")) if "," in meta["t"] else float(meta["t"]))
    return DistanceMatrix(values, labels, cols, meta["metric"], t, meta["symmetric"] == "true")


def write_distance(path, d: DistanceMatrix) -> Path:
    return _write(path, distance_to_csv(d))


def read_distance(path) -> DistanceMatrix:
    return distance_from_csv(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- embeddings

def embedding_to_csv(e: Embedding) -> str:
    rows = [["label"] + [f"x{k + 1}" for k in range(e.p)]]
    rows += [[lab] + [_num(v) for v in row] for lab, row in zip(e.labels, e.config)]
    return _csv_text(rows)


def write_embedding(path, e: Embedding, extra: dict | None = None) -> tuple[Path, Path]:
    path = Path(path)
    diag = e.diagnostics()
    diag.update(extra or {})
    return (_write(path, embedding_to_csv(e)),
            _write(path.with_suffix(".json"), dumps_json(diag)))


def scree_to_csv(rows: list[ScreeRow]) -> str:
    out = [["t", "p", "stress1", "converged"]]
    out += [[_t_str(r.t) if r.t is not None else "", r.p, _num(r.stress1),
             str(bool(r.converged)).lower()] for r in rows]
    return _csv_text(out)


def scree_from_csv(text: str) -> list[ScreeRow]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [ScreeRow(float(r["t"]) if r["t"] else None, int(r["p"]), float(r["stress1"]),
                     r["converged"] == "true") for r in rows]


# ---------------------------------------------------------------- depth

def depth_to_json(ds: DepthSpace) -> str:
    p = ds.params
    params = {"metric": p.get("metric"), "t": p.get("t"), "p": p.get("p"),
              "stress1": p.get("stress1")}
    params.update({k: v for k, v in p.items() if k not in params})
    return dumps_json({"params": params, "nodes": list(ds.labels),
                       "depth": [float(v) for v in ds.values]})


def depth_from_json(text: str) -> DepthSpace:
    obj = json.loads(text)
    return DepthSpace(np.array(obj["depth"], dtype=float), tuple(obj["nodes"]),
                      obj.get("params", {}))


def pattern_axis_values(dp: DepthPattern, p: int | None = None):
    """``(axis_value, cell)`` pairs for a one-parameter slice of the pattern."""
    if dp.axis == "p":
        return [(c.p, c) for c in dp.series()]
    p = dp.ps[0] if p is None else p
    return [(c.t, c) for c in dp.series(p=p)]


def pattern_to_csv(dp: DepthPattern, p: int | None = None) -> str:
    out = [["axis_value", "node", "depth", "stress1"]]
    for x, cell in pattern_axis_values(dp, p):
        if not cell.ok:
            continue
        for lab, v in zip(dp.labels, cell.depth.values):
            out.append([_num(x), lab, _num(v), _num(cell.stress1)])
    return _csv_text(out)


def pattern_from_csv(text: str):
    """Parse a pattern CSV into ``(axis_values, labels, depth matrix, stress1 list)``."""
    rows = list(csv.DictReader(io.StringIO(text)))
    xs: list[float] = []
    labels: list[str] = []
    for r in rows:
        x = float(r["axis_value"])
        if x not in xs:
            xs.append(x)
        if r["node"] not in labels:
            labels.append(r["node"])
    mat = np.full((len(xs), len(labels)), np.nan)
    stress = [float("nan")] * len(xs)
    xi = {x: i for i, x in enumerate(xs)}
    li = {lab: j for j, lab in enumerate(labels)}
    for r in rows:
        i = xi[float(r["axis_value"])]
        mat[i, li[r["node"]]] = float(r["depth"])
        stress[i] = float(r["stress1"])
    return xs, labels, mat, stress


def regions_to_csv(regions: list[tuple[object, DepthRegion]], with_axis: bool = True) -> str:
    head = (["axis_value"] if with_axis else []) + ["alpha", "q_alpha", "member_labels"]
    out = [head]
    for x, r in regions:
        row = [_num(r.alpha), _num(r.q_alpha), ";".join(r.labels)]
        out.append(([_num(x)] if with_axis else []) + row)
    return _csv_text(out)


# ---------------------------------------------------------------- centrality

def centralities_to_csv(vectors: list[CentralityVector]) -> str:
    head = "".join(
        f"# measure={v.measure} " + " ".join(f"{k}={_opt(val)}" for k, val in v.options.items())
        + "\n" for v in vectors)
    rows = [["node", "measure", "value"]]
    for v in vectors:
        rows += [[lab, v.measure, _num(x)] for lab, x in zip(v.labels, v.values)]
    return head + _csv_text(rows)


def _opt(v) -> str:
    if isinstance(v, float):
        return _num(v)
    if isinstance(v, bool):
        return str(v).lower()
    return str(v)


def centralities_from_csv(text: str) -> list[CentralityVector]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    by: dict[str, list] = {}
    for r in rows:
        by.setdefault(r["measure"], []).append((r["node"], float(r["value"])))
    return [CentralityVector(m, np.array([v for _, v in items]), tuple(n for n, _ in items))
            for m, items in by.items()]


def read_scores(path) -> list[tuple[str, object]]:
    """Load named score vectors from a centrality CSV or a depth JSON."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        ds = depth_from_json(text)
        return [(path.stem, ds)]
    return [(v.measure if v.measure else path.stem, v) for v in centralities_from_csv(text)]


# ---------------------------------------------------------------- correlation

def correlation_to_csv(cm: CorrelationMatrix, which: str = "r") -> str:
    mat = cm.r_s if which == "r" else cm.p_values
    rows = [[""] + list(cm.names)]
    rows += [[name] + [_num(v) for v in row] for name, row in zip(cm.names, mat)]
    return _csv_text(rows)


def correlation_to_json(cm: CorrelationMatrix) -> str:
    return dumps_json({"names": list(cm.names), "alpha": cm.alpha, "r_s": cm.r_s,
                       "p_values": cm.p_values, "significant": cm.significant})


def correlation_from_json(text: str) -> CorrelationMatrix:
    obj = json.loads(text)
    return CorrelationMatrix(tuple(obj["names"]), np.array(obj["r_s"], dtype=float),
                             np.array(obj["p_values"], dtype=float), float(obj["alpha"]))
