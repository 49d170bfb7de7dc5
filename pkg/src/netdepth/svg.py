"""Static SVG views of depth patterns, stress surfaces and correlation matrices.

Every renderer takes plain arrays (what the CSV/JSON outputs hold), so a plot
can be rebuilt byte-for-byte from the saved files. Coordinates are rounded to
two decimals to keep the markup stable and diffable.
"""
from __future__ import annotations

import math
from html import escape
from typing import Sequence

import numpy as np

from .depth import DepthSpace, depth_region

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
MUTED = "#c8c8c8"
# perceptually ordered ramp for stress (low = dark)
RAMP = ((0.0, (68, 1, 84)), (0.25, (59, 82, 139)), (0.5, (33, 145, 140)),
        (0.75, (94, 201, 98)), (1.0, (253, 231, 37)))


def _f(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _header(width: int, height: int, provenance: dict | None) -> list[str]:
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    for k, v in (provenance or {}).items():
        text = str(v).replace("--", "- -")
        out.append(f"<!-- {k}: {text} -->")
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
               f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">')
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>')
    return out


def _text(x, y, s, anchor="middle", extra="") -> str:
    return f'<text x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}"{extra}>{escape(str(s))}</text>'


def _ramp(v: float) -> str:
    v = min(1.0, max(0.0, v))
    for (a, ca), (b, cb) in zip(RAMP, RAMP[1:]):
        if v <= b:
            w = (v - a) / (b - a)
            rgb = [round(ca[k] + w * (cb[k] - ca[k])) for k in range(3)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*RAMP[-1][1])


def _diverging(v: float) -> str:
    """Blue for -1, white for 0, red for +1."""
    v = min(1.0, max(-1.0, v))
    if v >= 0:
        rgb = (255, round(255 * (1 - v) + 40 * v), round(255 * (1 - v) + 40 * v))
    else:
        w = -v
        rgb = (round(255 * (1 - w) + 40 * w), round(255 * (1 - w) + 90 * w), 255)
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    return [start + k * step for k in range(int((hi - start) / step + 1e-9) + 1)]


def highlighted_nodes(labels: Sequence[str], depths: np.ndarray, alpha: float) -> list[str]:
    """Nodes that fall in the ``alpha`` depth region in at least one row of ``depths``."""
    hit: set[int] = set()
    for row in np.asarray(depths, dtype=float):
        ok = ~np.isnan(row)
        if ok.sum() < 1:
            continue
        idx = np.flatnonzero(ok)
        reg = depth_region(DepthSpace(row[ok], tuple(labels[i] for i in idx)), alpha)
        hit.update(int(idx[m]) for m in reg.members)
    return [labels[i] for i in sorted(hit)]


def pattern_svg(axis_values: Sequence[float], labels: Sequence[str], depths: np.ndarray,
                alpha: float = 0.9, axis_name: str = "t", title: str = "",
                provenance: dict | None = None) -> str:
    """Depth against the swept parameter, one line per node.

    Nodes that enter the ``alpha`` region anywhere along the sweep are drawn
    in colour and labelled at their last point; the rest are grey.
    """
    xs = np.asarray(axis_values, dtype=float)
    mat = np.asarray(depths, dtype=float)
    w, h, ml, mr, mt, mb = 720, 420, 56, 90, 34, 44
    pw, ph = w - ml - mr, h - mt - mb
    ymax = float(np.nanmax(mat)) if np.any(~np.isnan(mat)) else 1.0
    ymax = ymax * 1.05 if ymax > 0 else 1.0
    x0, x1 = float(xs.min()), float(xs.max())
    span = x1 - x0 if x1 > x0 else 1.0

    def px(x):
        return ml + (x - x0) / span * pw

    def py(y):
        return mt + ph - y / ymax * ph

    out = _header(w, h, provenance)
    out.append(_text(w / 2, 20, title or f"depth pattern over {axis_name}"))
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for tx in _ticks(x0, x1, min(10, max(1, len(xs) - 1))):
        out.append(f'<line x1="{_f(px(tx))}" y1="{mt + ph}" x2="{_f(px(tx))}" '
                   f'y2="{mt + ph + 4}" stroke="black"/>')
        out.append(_text(px(tx), mt + ph + 16, _f(tx)))
    for ty in _ticks(0.0, ymax):
        out.append(f'<line x1="{ml - 4}" y1="{_f(py(ty))}" x2="{ml}" y2="{_f(py(ty))}" '
                   'stroke="black"/>')
        out.append(_text(ml - 6, py(ty) + 4, f"{ty:.3g}", anchor="end"))
    out.append(_text(ml + pw / 2, h - 8, axis_name))
    out.append(_text(14, mt + ph / 2, "depth", extra=f' transform="rotate(-90 14 {_f(mt + ph / 2)})"'))

    hi = highlighted_nodes(list(labels), mat, alpha)
    colour = {lab: PALETTE[k % len(PALETTE)] for k, lab in enumerate(hi)}
    order = [j for j, lab in enumerate(labels) if lab not in colour] + \
            [j for j, lab in enumerate(labels) if lab in colour]
    for j in order:
        lab = labels[j]
        pts = [(px(x), py(y)) for x, y in zip(xs, mat[:, j]) if not np.isnan(y)]
        if not pts:
            continue
        c = colour.get(lab, MUTED)
        sw = "1.8" if lab in colour else "1"
        path = " ".join(f"{_f(a)},{_f(b)}" for a, b in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="{c}" stroke-width="{sw}">'
                   f'<title>{escape(lab)}</title></polyline>')
        if lab in colour:
            out.append(_text(pts[-1][0] + 4, pts[-1][1] + 4, lab, anchor="start",
                             extra=f' fill="{c}"'))
    out.append(_text(w - mr + 8, mt + 10, f"R({_f(alpha)}) members", anchor="start"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap_svg(row_values: Sequence[float], col_values: Sequence[float], grid: np.ndarray,
                row_name: str = "t", col_name: str = "p", title: str = "stress-1",
                provenance: dict | None = None) -> str:
    """Colour grid of ``grid[i, j]`` (rows = ``row_values``) on a [min, max] ramp."""
    g = np.asarray(grid, dtype=float)
    nr, nc = g.shape
    cell = max(10, min(28, 560 // max(nr, nc)))
    ml, mt, mr, mb = 56, 34, 90, 44
    w, h = ml + nc * cell + mr, mt + nr * cell + mb
    ok = g[~np.isnan(g)]
    lo, hi = (float(ok.min()), float(ok.max())) if ok.size else (0.0, 1.0)
    span = hi - lo if hi > lo else 1.0
    out = _header(w, h, provenance)
    out.append(_text(w / 2, 20, title))
    for i in range(nr):
        for j in range(nc):
            v = g[i, j]
            fill = "#ffffff" if np.isnan(v) else _ramp((v - lo) / span)
            tip = "nan" if np.isnan(v) else f"{v:.4g}"
            out.append(f'<rect x="{ml + j * cell}" y="{mt + i * cell}" width="{cell}" '
                       f'height="{cell}" fill="{fill}"><title>{row_name}={_f(row_values[i])} '
                       f'{col_name}={_f(col_values[j])}: {tip}</title></rect>')
    step_c = max(1, nc // 10)
    for j in range(0, nc, step_c):
        out.append(_text(ml + (j + 0.5) * cell, mt + nr * cell + 14, _f(col_values[j])))
    step_r = max(1, nr // 10)
    for i in range(0, nr, step_r):
        out.append(_text(ml - 6, mt + (i + 0.5) * cell + 4, _f(row_values[i]), anchor="end"))
    out.append(_text(ml + nc * cell / 2, h - 8, col_name))
    out.append(_text(14, mt + nr * cell / 2, row_name,
                     extra=f' transform="rotate(-90 14 {_f(mt + nr * cell / 2)})"'))
    # colour bar
    bx = ml + nc * cell + 20
    bh = nr * cell
    for k in range(20):
        out.append(f'<rect x="{bx}" y="{_f(mt + bh * (19 - k) / 20)}" width="12" '
                   f'height="{_f(bh / 20 + 0.5)}" fill="{_ramp(k / 19)}"/>')
    out.append(_text(bx + 16, mt + 8, f"{hi:.3g}", anchor="start"))
    out.append(_text(bx + 16, mt + bh, f"{lo:.3g}", anchor="start"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def correlation_svg(names: Sequence[str], r_s: np.ndarray, significant: np.ndarray,
                    title: str = "Spearman rank correlation",
                    provenance: dict | None = None) -> str:
    """Diverging heatmap of ``r_s``; non-significant cells are crossed out."""
    r = np.asarray(r_s, dtype=float)
    sig = np.asarray(significant, dtype=bool)
    m = len(names)
    cell = max(16, min(40, 640 // max(1, m)))
    lab_w = 8 + 6 * max(len(n) for n in names)
    ml, mt = lab_w, lab_w + 30
    w, h = ml + m * cell + 20, mt + m * cell + 20
    out = _header(w, h, provenance)
    out.append(_text(w / 2, 18, title))
    for i in range(m):
        out.append(_text(ml - 4, mt + (i + 0.5) * cell + 4, names[i], anchor="end"))
        cx = ml + (i + 0.5) * cell
        out.append(_text(cx, mt - 4, names[i], anchor="start",
                         extra=f' transform="rotate(-90 {_f(cx + 4)} {mt - 4})"'))
    for i in range(m):
        for j in range(m):
            x, y = ml + j * cell, mt + i * cell
            out.append(f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                       f'fill="{_diverging(r[i, j])}" stroke="white"><title>{escape(names[i])} / '
                       f'{escape(names[j])}: {r[i, j]:.3f}</title></rect>')
            if i != j and not sig[i, j]:
                a, b = 3, cell - 3
                out.append(f'<path d="M{x + a},{y + a}L{x + b},{y + b}M{x + b},{y + a}'
                           f'L{x + a},{y + b}" stroke="black" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
