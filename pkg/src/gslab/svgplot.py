"""Tiny SVG line-plot emitter.

Data-faithful polylines with linear or log10 axes, enough for quick looks
at mass curves, G and J profiles, and eigenvalue ladders.  No external
renderer, no fonts beyond the SVG defaults, deterministic output.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["line_plot"]

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 72, 18, 34, 52
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf"]


def _transform(v, lo, hi, log):
    v = np.asarray(v, float)
    if log:
        v, lo, hi = np.log10(v), math.log10(lo), math.log10(hi)
    if hi == lo:
        hi = lo + 1.0
    return (v - lo) / (hi - lo)


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        k0, k1 = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        if k1 - k0 > 12:
            step = (k1 - k0 + 5) // 6
        else:
            step = 1
        return [10.0 ** k for k in range(k0, k1 + 1, step)]
    return list(np.linspace(lo, hi, 5))


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def line_plot(series, title: str = "", xlabel: str = "", ylabel: str = "",
              logx: bool = False, logy: bool = False) -> str:
    """Render ``series`` = [(xs, ys, label), ...] to an SVG string.

    Log axes drop nonpositive points of the offending coordinate; a label
    of "" suppresses the legend entry (useful for ladder segments).
    """
    clean = []
    for xs, ys, label in series:
        xs = np.asarray(xs, float)
        ys = np.asarray(ys, float)
        keep = np.isfinite(xs) & np.isfinite(ys)
        if logx:
            keep &= xs > 0.0
        if logy:
            keep &= ys > 0.0
        if keep.any():
            clean.append((xs[keep], ys[keep], label))
    if not clean:
        clean = [(np.array([0.0, 1.0]), np.array([0.0, 0.0]), "")]

    x_lo = min(float(xs.min()) for xs, _, _ in clean)
    x_hi = max(float(xs.max()) for xs, _, _ in clean)
    y_lo = min(float(ys.min()) for _, ys, _ in clean)
    y_hi = max(float(ys.max()) for _, ys, _ in clean)
    if not logy:
        pad = 0.05 * (y_hi - y_lo or abs(y_hi) or 1.0)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    if not logx and x_hi == x_lo:
        x_hi = x_lo + 1.0

    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(v):
        return _ML + _transform(v, x_lo, x_hi, logx) * pw

    def py(v):
        return _MT + (1.0 - _transform(v, y_lo, y_hi, logy)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
           f'height="{_H}" viewBox="0 0 {_W} {_H}">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>']
    # frame
    out.append(f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" '
               'fill="none" stroke="#333" stroke-width="1"/>')
    # ticks and grid
    for tv in _ticks(x_lo, x_hi, logx):
        x = float(px(tv))
        out.append(f'<line x1="{x:.2f}" y1="{_MT + ph}" x2="{x:.2f}" '
                   f'y2="{_MT + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{x:.2f}" y="{_MT + ph + 18}" '
                   f'font-size="11" text-anchor="middle" '
                   f'font-family="sans-serif">{_fmt(tv)}</text>')
    for tv in _ticks(y_lo, y_hi, logy):
        y = float(py(tv))
        out.append(f'<line x1="{_ML - 5}" y1="{y:.2f}" x2="{_ML}" '
                   f'y2="{y:.2f}" stroke="#333"/>')
        out.append(f'<text x="{_ML - 8}" y="{y + 4:.2f}" font-size="11" '
                   f'text-anchor="end" '
                   f'font-family="sans-serif">{_fmt(tv)}</text>')
    # zero line when visible on a linear y axis
    if not logy and y_lo < 0.0 < y_hi:
        y0 = float(py(0.0))
        out.append(f'<line x1="{_ML}" y1="{y0:.2f}" x2="{_ML + pw}" '
                   f'y2="{y0:.2f}" stroke="#bbb" stroke-dasharray="4 3"/>')

    legend_y = _MT + 14
    for i, (xs, ys, label) in enumerate(clean):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{float(px(x)):.2f},{float(py(y)):.2f}"
                       for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        if label:
            out.append(f'<text x="{_ML + pw - 8}" y="{legend_y}" '
                       f'font-size="12" text-anchor="end" fill="{color}" '
                       f'font-family="sans-serif">{label}</text>')
            legend_y += 16

    if title:
        out.append(f'<text x="{_W / 2:.0f}" y="20" font-size="14" '
                   f'text-anchor="middle" '
                   f'font-family="sans-serif">{title}</text>')
    if xlabel:
        out.append(f'<text x="{_ML + pw / 2:.0f}" y="{_H - 12}" '
                   f'font-size="12" text-anchor="middle" '
                   f'font-family="sans-serif">{xlabel}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{_MT + ph / 2:.0f}" font-size="12" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'transform="rotate(-90 16 {_MT + ph / 2:.0f})">'
                   f'{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
