"""Minimal deterministic SVG line plots."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=20, top=40, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def _num(x: float) -> str:
    return f"{x:.2f}"


def _tick(x: float) -> str:
    return f"{x:.3g}"


def line_plot(series, title: str = "", xlabel: str = "", ylabel: str = "", logx: bool = False,
              logy: bool = False, command: str = "") -> str:
    """series: list of (label, xs, ys).  Non-positive values are dropped on log axes."""
    cleaned = []
    for label, xs, ys in series:
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        keep = np.isfinite(xs) & np.isfinite(ys)
        if logx:
            keep &= xs > 0
        if logy:
            keep &= ys > 0
        cleaned.append((label, xs[keep], ys[keep]))
    tx = (lambda v: np.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: np.log10(v)) if logy else (lambda v: v)
    allx = np.concatenate([tx(c[1]) for c in cleaned]) if cleaned else np.zeros(0)
    ally = np.concatenate([ty(c[2]) for c in cleaned]) if cleaned else np.zeros(0)
    x0, x1 = (allx.min(), allx.max()) if allx.size else (0.0, 1.0)
    y0, y1 = (ally.min(), ally.max()) if ally.size else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def py(v):
        return MARGIN["top"] + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- {escape(command).replace('--', '- -')} -->" if command else "<!-- -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="15" font-family="sans-serif">{escape(title)}</text>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(5):
        fx = x0 + (x1 - x0) * k / 4
        fy = y0 + (y1 - y0) * k / 4
        lx = _tick(10**fx if logx else fx)
        ly = _tick(10**fy if logy else fy)
        out.append(f'<text x="{_num(px(fx))}" y="{HEIGHT - MARGIN["bottom"] + 18}" text-anchor="middle" font-size="11" font-family="sans-serif">{lx}</text>')
        out.append(f'<text x="{MARGIN["left"] - 6}" y="{_num(py(fy) + 4)}" text-anchor="end" font-size="11" font-family="sans-serif">{ly}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12" font-family="sans-serif">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 16 {HEIGHT / 2})">{escape(ylabel)}</text>')
    for i, (label, xs, ys) in enumerate(cleaned):
        color = COLORS[i % len(COLORS)]
        if xs.size:
            pts = " ".join(f"{_num(px(a))},{_num(py(b))}" for a, b in zip(tx(xs), ty(ys)))
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{MARGIN["left"] + 8}" y="{MARGIN["top"] + 16 + 14 * i}" font-size="11" font-family="sans-serif" fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
