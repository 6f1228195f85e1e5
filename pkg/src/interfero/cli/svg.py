"""Tiny SVG renderers for curves and heatmaps."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping
from xml.sax.saxutils import escape

import numpy as np

from .files import _write

WIDTH, HEIGHT = 480, 320
MARGIN = dict(left=64, right=16, top=32, bottom=44)
PALETTE = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d68910")
# anchor colours of a perceptually ordered dark-blue to yellow map
_CMAP = np.array(
    [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]], dtype=float
)
MAX_CELLS = 96


def _frame(title: str, xlabel: str, ylabel: str, xr, yr) -> list[str]:
    left, top = MARGIN["left"], MARGIN["top"]
    w = WIDTH - left - MARGIN["right"]
    h = HEIGHT - top - MARGIN["bottom"]
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>',
        f'<text x="{left + w / 2:.1f}" y="{HEIGHT - 8}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="14" y="{top + h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {top + h / 2:.1f})">{escape(ylabel)}</text>',
        f'<text x="{left}" y="{top + h + 14}" text-anchor="middle">{xr[0]:.4g}</text>',
        f'<text x="{left + w}" y="{top + h + 14}" text-anchor="middle">{xr[1]:.4g}</text>',
        f'<text x="{left - 4}" y="{top + h}" text-anchor="end">{yr[0]:.4g}</text>',
        f'<text x="{left - 4}" y="{top + 8}" text-anchor="end">{yr[1]:.4g}</text>',
    ]


def _scale(v, lo, hi, a, b):
    span = hi - lo if hi > lo else 1.0
    return a + (np.asarray(v, dtype=float) - lo) / span * (b - a)


def line_plot(path, x, series: Mapping[str, np.ndarray], title="", xlabel="", ylabel="") -> Path:
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    xr = (float(x.min()), float(x.max()))
    lo = min(float(v.min()) for v in ys.values())
    hi = max(float(v.max()) for v in ys.values())
    if hi == lo:
        hi = lo + 1.0
    yr = (lo, hi)
    parts = _frame(title, xlabel, ylabel, xr, yr)
    left, top = MARGIN["left"], MARGIN["top"]
    px = _scale(x, *xr, left, WIDTH - MARGIN["right"])
    for i, (name, y) in enumerate(ys.items()):
        py = _scale(y, *yr, HEIGHT - MARGIN["bottom"], top)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        colour = PALETTE[i % len(PALETTE)]
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{pts}"/>')
        if len(ys) > 1:
            parts.append(
                f'<text x="{WIDTH - MARGIN["right"] - 4}" y="{top + 14 + 13 * i}" '
                f'text-anchor="end" fill="{colour}">{escape(name)}</text>'
            )
    parts.append("</svg>")
    return _write(Path(path), "\n".join(parts) + "\n")


def _colour(t: float) -> str:
    pos = min(max(t, 0.0), 1.0) * (len(_CMAP) - 1)
    i = min(int(pos), len(_CMAP) - 2)
    rgb = _CMAP[i] + (pos - i) * (_CMAP[i + 1] - _CMAP[i])
    return "#{:02x}{:02x}{:02x}".format(*np.rint(rgb).astype(int))


def heatmap(path, x, y, z, title="", xlabel="", ylabel="") -> Path:
    """``z[i, j]`` is drawn at ``(x[i], y[j])``; large grids are block-averaged."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    bx = max(1, -(-x.size // MAX_CELLS))
    by = max(1, -(-y.size // MAX_CELLS))
    nx, ny = x.size // bx, y.size // by
    zb = z[: nx * bx, : ny * by].reshape(nx, bx, ny, by).mean(axis=(1, 3))
    lo, hi = float(zb.min()), float(zb.max())
    xr = (float(x.min()), float(x.max()))
    yr = (float(y.min()), float(y.max()))
    parts = _frame(title, xlabel, ylabel, xr, yr)
    left, top = MARGIN["left"], MARGIN["top"]
    cw = (WIDTH - left - MARGIN["right"]) / nx
    ch = (HEIGHT - top - MARGIN["bottom"]) / ny
    span = hi - lo if hi > lo else 1.0
    for i in range(nx):
        for j in range(ny):
            colour = _colour((zb[i, j] - lo) / span)
            yy = top + (ny - 1 - j) * ch
            parts.append(
                f'<rect x="{left + i * cw:.2f}" y="{yy:.2f}" width="{cw + 0.05:.2f}" '
                f'height="{ch + 0.05:.2f}" fill="{colour}"/>'
            )
    parts.append("</svg>")
    return _write(Path(path), "\n".join(parts) + "\n")
