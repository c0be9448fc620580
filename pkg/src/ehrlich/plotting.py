"""Static SVG quantile-band plots of campaign aggregates."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .core import LoadError

WIDTH, HEIGHT = 640, 400
MARGIN = {"left": 70, "right": 20, "top": 30, "bottom": 50}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _finite(values):
    return [v for v in values if v is not None and math.isfinite(v)]


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render_metric(campaigns: list[dict], metric: str) -> str:
    """One SVG: median polyline and q10-q90 band per campaign, x = evaluations."""
    xs_all = [x for c in campaigns for x in c["evaluations"]]
    ys_all = _finite(y for c in campaigns for q in ("q10", "q50", "q90") for y in c["metrics"][metric][q])
    if not xs_all or not ys_all:
        raise LoadError(f"nothing finite to plot for {metric}")
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    plot_w = WIDTH - MARGIN["left"] - MARGIN["right"]
    plot_h = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * plot_w

    def py(y):
        y = min(max(y, y0), y1) if math.isfinite(y) else (y1 if y > 0 else y0)
        return MARGIN["top"] + (1 - (y - y0) / (y1 - y0)) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="18" text-anchor="middle" font-size="14">{escape(metric)}</text>',
        f'<line class="axis" x1="{MARGIN["left"]}" y1="{HEIGHT - MARGIN["bottom"]}" '
        f'x2="{WIDTH - MARGIN["right"]}" y2="{HEIGHT - MARGIN["bottom"]}" stroke="black"/>',
        f'<line class="axis" x1="{MARGIN["left"]}" y1="{MARGIN["top"]}" '
        f'x2="{MARGIN["left"]}" y2="{HEIGHT - MARGIN["bottom"]}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">evaluations</text>',
    ]
    for frac in (0.0, 0.5, 1.0):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        parts.append(f'<text x="{_fmt(px(xv))}" y="{HEIGHT - MARGIN["bottom"] + 16}" text-anchor="middle" font-size="10">{xv:.3g}</text>')
        parts.append(f'<text x="{MARGIN["left"] - 6}" y="{_fmt(py(yv) + 3)}" text-anchor="end" font-size="10">{yv:.3g}</text>')

    for idx, campaign in enumerate(campaigns):
        color = PALETTE[idx % len(PALETTE)]
        bands = campaign["metrics"][metric]
        xs = campaign["evaluations"]
        upper = [f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, bands["q90"])]
        lower = [f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(reversed(xs), reversed(bands["q10"]))]
        median = [f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, bands["q50"])]
        parts.append(f'<polygon class="band" points="{" ".join(upper + lower)}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
        parts.append(f'<polyline class="median" points="{" ".join(median)}" fill="none" stroke="{color}" stroke-width="2"/>')
        label = campaign.get("label") or f"campaign {idx + 1}"
        ly = MARGIN["top"] + 12 + 16 * idx
        lx = WIDTH - MARGIN["right"] - 150
        parts.append(
            f'<g class="legend-entry"><rect x="{lx}" y="{ly - 8}" width="12" height="8" fill="{color}"/>'
            f'<text x="{lx + 16}" y="{ly}" font-size="11">{escape(label)}</text></g>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_campaigns(campaigns: list[dict], out_dir) -> list[Path]:
    """Write ``<metric>.svg`` for every metric shared by all campaigns."""
    if not campaigns:
        raise LoadError("no campaigns to plot")
    metrics = [m for m in campaigns[0]["metrics"] if all(m in c["metrics"] for c in campaigns)]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for metric in metrics:
        path = out_dir / f"{metric}.svg"
        path.write_text(render_metric(campaigns, metric), encoding="utf-8")
        written.append(path)
    return written
