"""Minimal hand-written SVG line charts (fixed 800x500 viewBox)."""

from __future__ import annotations

import math
from html import escape

import numpy as np

WIDTH, HEIGHT = 800, 500
LEFT, RIGHT, TOP, BOTTOM = 80, 30, 40, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def nice_ticks(lo, hi, target=6):
    """Round tick positions covering ``[lo, hi]`` (1-2-5 steps)."""
    span = hi - lo
    raw = span / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    k = 0
    while start + k * step <= hi + 1e-9 * step:
        value = start + k * step
        if value >= lo - 1e-9 * step:
            ticks.append(0.0 if abs(value) < 1e-12 * step else value)
        k += 1
    return ticks


def _padded_range(values):
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi - lo <= 1e-9 * max(1.0, abs(lo), abs(hi)):
        pad = max(abs(lo) * 0.05, 1e-3)
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _fmt(v):
    return f"{v:.2f}"


def _tick_label(v):
    return f"{v:.6g}"


def line_chart(series, title="", xlabel="s", equal_aspect=False):
    """Render ``[(name, x, y), ...]`` as an SVG document string."""
    xs = np.concatenate([np.asarray(x, float) for _, x, _ in series])
    ys = np.concatenate([np.asarray(y, float) for _, _, y in series])
    finite = np.isfinite(xs) & np.isfinite(ys)
    if not finite.any():
        xs, ys = np.array([0.0, 1.0]), np.array([0.0, 1.0])
    else:
        xs, ys = xs[finite], ys[finite]
    x0, x1 = _padded_range(xs)
    y0, y1 = _padded_range(ys)
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM
    if equal_aspect:
        scale = max((x1 - x0) / pw, (y1 - y0) / ph)
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        x0, x1 = cx - 0.5 * scale * pw, cx + 0.5 * scale * pw
        y0, y1 = cy - 0.5 * scale * ph, cy + 0.5 * scale * ph

    def px(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return TOP + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{_fmt(X)}" y1="{TOP + ph}" x2="{_fmt(X)}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(X)}" y="{TOP + ph + 19}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in nice_ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{_fmt(Y)}" x2="{LEFT}" y2="{_fmt(Y)}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_fmt(Y + 4)}" text-anchor="end">{_tick_label(t)}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.0f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    for i, (name, x, y) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        x, y = np.asarray(x, float), np.asarray(y, float)
        # break the polyline at non-finite values
        segment = []
        for a, b in zip(x, y):
            if np.isfinite(a) and np.isfinite(b):
                segment.append(f"{_fmt(px(a))},{_fmt(py(b))}")
            elif segment:
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(segment)}"/>')
                segment = []
        if segment:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(segment)}"/>')
        ly = TOP + 16 + 16 * i
        out.append(f'<line x1="{LEFT + pw - 120}" y1="{ly}" x2="{LEFT + pw - 100}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{LEFT + pw - 95}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def stereographic(points):
    """Project unit vectors to the plane from the pole opposite their mean."""
    P = np.asarray(points, float)
    m = P.mean(axis=0)
    pole = -m / np.linalg.norm(m) if np.linalg.norm(m) > 1e-6 else np.array([0.0, 0.0, 1.0])
    helper = np.array([1.0, 0.0, 0.0]) if abs(pole[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(pole, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(pole, e1)
    z = P @ pole
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(1 - z > 1e-9, 1 - z, np.nan)
        return (P @ e1) / d, (P @ e2) / d
