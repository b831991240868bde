"""Dependency-free SVG line charts for scan reports."""

from __future__ import annotations

import math
from typing import Dict, List, Sequence, Tuple

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]
FG = "#222222"
GRID = "#dddddd"


def _escape(text: str) -> str:
    """Escape XML special characters."""
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _range(values: Sequence[float]) -> Tuple[float, float]:
    low, high = min(values), max(values)
    if low == high:
        pad = abs(low) * 0.05 or 1.0
        return low - pad, high + pad
    return low, high


def _ticks(low: float, high: float, count: int = 5) -> List[float]:
    return [low + (high - low) * i / count for i in range(count + 1)]


def line_chart(
    series: Dict[str, List[Tuple[float, float]]],
    *,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: int = 720,
    height: int = 440,
) -> str:
    """SVG document with one polyline per series; points with non-finite y are dropped."""
    finite = {
        name: [(x, y) for x, y in points if math.isfinite(x) and math.isfinite(y)]
        for name, points in series.items()
    }
    xs = [x for points in finite.values() for x, _ in points] or [0.0, 1.0]
    ys = [y for points in finite.values() for _, y in points] or [0.0, 1.0]
    x_low, x_high = _range(xs)
    y_low, y_high = _range(ys)

    legend_height = 16 * len(series)
    margin = {"top": 40, "right": 20, "bottom": 60 + legend_height, "left": 90}
    chart_w = width - margin["left"] - margin["right"]
    chart_h = height - margin["top"] - margin["bottom"]
    if chart_h < 100:
        height += 100 - chart_h
        chart_h = 100

    def px(x: float) -> float:
        return margin["left"] + (x - x_low) / (x_high - x_low) * chart_w

    def py(y: float) -> float:
        return margin["top"] + chart_h - (y - y_low) / (y_high - y_low) * chart_h

    parts = [
        f'<svg width="{width}" height="{height}" xmlns="http://www.w3.org/2000/svg">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2}" y="24" text-anchor="middle" fill="{FG}" '
            f'font-size="14" font-weight="600">{_escape(title)}</text>'
        )

    for value in _ticks(y_low, y_high):
        y = py(value)
        parts.append(
            f'<line x1="{margin["left"]}" y1="{y:.1f}" x2="{margin["left"] + chart_w}" '
            f'y2="{y:.1f}" stroke="{GRID}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{margin["left"] - 6}" y="{y + 4:.1f}" text-anchor="end" '
            f'fill="{FG}" font-size="10">{value:.4g}</text>'
        )
    for value in _ticks(x_low, x_high):
        x = px(value)
        parts.append(
            f'<text x="{x:.1f}" y="{margin["top"] + chart_h + 16}" text-anchor="middle" '
            f'fill="{FG}" font-size="10">{value:.4g}</text>'
        )
    parts.append(
        f'<rect x="{margin["left"]}" y="{margin["top"]}" width="{chart_w}" '
        f'height="{chart_h}" fill="none" stroke="{FG}" stroke-width="1"/>'
    )
    if x_label:
        parts.append(
            f'<text x="{margin["left"] + chart_w / 2}" y="{margin["top"] + chart_h + 36}" '
            f'text-anchor="middle" fill="{FG}" font-size="12">{_escape(x_label)}</text>'
        )
    if y_label:
        cy = margin["top"] + chart_h / 2
        parts.append(
            f'<text x="16" y="{cy}" text-anchor="middle" fill="{FG}" font-size="12" '
            f'transform="rotate(-90 16 {cy})">{_escape(y_label)}</text>'
        )

    legend_top = margin["top"] + chart_h + 50
    for index, (name, points) in enumerate(finite.items()):
        color = PALETTE[index % len(PALETTE)]
        label = _escape(name)
        if points:
            coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in points)
            parts.append(
                f'<polyline data-series="{label}" points="{coords}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        ly = legend_top + 16 * index
        parts.append(
            f'<line x1="{margin["left"]}" y1="{ly}" x2="{margin["left"] + 20}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{margin["left"] + 26}" y="{ly + 4}" fill="{FG}" '
            f'font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
