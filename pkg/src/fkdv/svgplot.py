"""Minimal self-contained SVG line plots (polylines and axes only).

CSV is the authoritative output of every command; these plots exist so a
figure can be eyeballed without any plotting stack.
"""

from __future__ import annotations

import math
from pathlib import Path

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _finite(vals):
    return [v for v in vals if math.isfinite(v)]


def plot_lines(path: Path, curves, title: str = "", xlabel: str = "",
               ylabel: str = "", width: int = 640, height: int = 440) -> None:
    """curves: list of (xs, ys, label); non-finite points break the line."""
    pad = 50.0
    all_x = [v for xs, _, _ in curves for v in _finite(xs)]
    all_y = [v for _, ys, _ in curves for v in _finite(ys)]
    if not all_x or not all_y:
        all_x, all_y = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x: float) -> float:
        return pad + (x - x_lo) / (x_hi - x_lo) * (width - 2 * pad)

    def sy(y: float) -> float:
        return height - pad - (y - y_lo) / (y_hi - y_lo) * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" '
             f'height="{height - 2 * pad}" fill="none" stroke="#444"/>']
    if title:
        parts.append(f'<text x="{width / 2}" y="24" text-anchor="middle" '
                     f'font-size="14">{title}</text>')
    parts.append(f'<text x="{width / 2}" y="{height - 12}" text-anchor="middle" '
                 f'font-size="12">{xlabel}</text>')
    parts.append(f'<text x="16" y="{height / 2}" font-size="12" '
                 f'transform="rotate(-90 16 {height / 2})" '
                 f'text-anchor="middle">{ylabel}</text>')
    for tick in (x_lo, 0.5 * (x_lo + x_hi), x_hi):
        parts.append(f'<text x="{sx(tick)}" y="{height - pad + 16}" '
                     f'text-anchor="middle" font-size="10">{tick:.4g}</text>')
    for tick in (y_lo, 0.5 * (y_lo + y_hi), y_hi):
        parts.append(f'<text x="{pad - 6}" y="{sy(tick) + 3}" '
                     f'text-anchor="end" font-size="10">{tick:.4g}</text>')
    for idx, (xs, ys, label) in enumerate(curves):
        color = _COLORS[idx % len(_COLORS)]
        pieces: list[str] = []
        current: list[str] = []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                current.append(f"{sx(x):.2f},{sy(y):.2f}")
            elif current:
                pieces.append(" ".join(current))
                current = []
        if current:
            pieces.append(" ".join(current))
        for piece in pieces:
            parts.append(f'<polyline points="{piece}" fill="none" '
                         f'stroke="{color}" stroke-width="1.3"/>')
        if label:
            parts.append(f'<text x="{width - pad - 4}" y="{pad + 14 + 14 * idx}" '
                         f'text-anchor="end" font-size="11" fill="{color}">'
                         f'{label}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
