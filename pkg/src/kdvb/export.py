"""CSV and SVG writers with byte-stable output."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SVG_W, SVG_H = 720, 440
_MARGIN = dict(left=70, right=20, top=30, bottom=55)
_COLOURS = ["#1f4e9c", "#c0392b", "#27853f", "#7d3c98", "#b9770e", "#117a8b"]


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def emit_csv(path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
    """Header row plus one line per row; 12 significant digits, LF endings."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(round(t, 12))
        t += step
    return out


def emit_svg_plot(
    path,
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    xlabel: str = "zeta",
    ylabel: str = "u",
    title: str = "",
) -> Path:
    """Line plot: one polyline per (label, x, y) series, labelled axes, legend.

    Output depends only on the inputs, so identical data gives identical bytes.
    """
    if not series or any(len(x) == 0 for _, x, _ in series):
        raise ValueError("nothing to plot")
    xs = np.concatenate([np.asarray(x, float) for _, x, _ in series])
    ys = np.concatenate([np.asarray(y, float) for _, _, y in series])
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    L, R, T, B = _MARGIN["left"], _MARGIN["right"], _MARGIN["top"], _MARGIN["bottom"]
    pw, ph = SVG_W - L - R, SVG_H - T - B

    def px(x):
        return L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return T + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" '
        f'viewBox="0 0 {SVG_W} {SVG_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>',
        f'<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{T + ph}" x2="{X:.2f}" y2="{T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{T + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{L - 5}" y1="{Y:.2f}" x2="{L}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{L - 8}" y="{Y + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{L + pw / 2:.1f}" y="{SVG_H - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(
        f'<text x="16" y="{T + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {T + ph / 2:.1f})">{ylabel}</text>'
    )
    if title:
        out.append(f'<text x="{L + pw / 2:.1f}" y="20" text-anchor="middle">{title}</text>')
    for n, (label, x, y) in enumerate(series):
        colour = _COLOURS[n % len(_COLOURS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(np.asarray(x, float), np.asarray(y, float)))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        ly = T + 16 + 16 * n
        out.append(f'<line x1="{L + pw - 120}" y1="{ly}" x2="{L + pw - 95}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{L + pw - 90}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
    return path
