"""Self-contained SVG line charts from result CSVs.

When the y column is ``mer`` the axis is logarithmic; zero MERs cannot be
placed on it and are drawn at half the smallest positive value in the plot
(or at 1e-6 if nothing is positive), with a hollow marker.
"""
from __future__ import annotations

import math
from collections import OrderedDict
from xml.sax.saxutils import escape

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]
ZERO_FLOOR_IF_NONE = 1e-6

W, H = 640, 420
ML, MR, MT, MB = 70, 170, 40, 50


def group_series(rows, x_col: str, series_cols, y_col: str = "mer"):
    if not rows:
        raise ValueError("CSV has no data rows")
    needed = [x_col, y_col, *series_cols]
    missing = [c for c in needed if c not in rows[0]]
    if missing:
        raise ValueError(f"missing columns: {', '.join(missing)}")
    series: OrderedDict = OrderedDict()
    for r in rows:
        key = tuple(r[c] for c in series_cols)
        series.setdefault(key, []).append((float(r[x_col]), float(r[y_col])))
    for pts in series.values():
        pts.sort()
    return series


def zero_floor(values) -> float:
    pos = [v for v in values if v > 0 and not math.isnan(v)]
    return min(pos) / 2 if pos else ZERO_FLOOR_IF_NONE


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    step = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(step))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= step), default=step)
    start = math.ceil(lo / step) * step
    out, t = [], start
    while t <= hi + 1e-12:
        out.append(round(t, 12))
        t += step
    return out


def render_svg(rows, x_col: str, series_cols, y_col: str = "mer", title: str | None = None) -> str:
    series = group_series(rows, x_col, series_cols, y_col)
    logy = y_col == "mer"
    all_y = [y for pts in series.values() for _, y in pts if not math.isnan(y)]
    all_x = [x for pts in series.values() for x, _ in pts]
    floor = zero_floor(all_y) if logy else None

    def ty(y):
        return math.log10(max(y, floor)) if logy else y

    ys = [ty(y) for y in all_y] or [0.0]
    ylo, yhi = min(ys), max(ys)
    if logy:
        ylo, yhi = math.floor(ylo), max(math.ceil(yhi), math.floor(ylo) + 1)
    elif ylo == yhi:
        ylo, yhi = ylo - 1, yhi + 1
    xlo, xhi = min(all_x), max(all_x)
    if xlo == xhi:
        xlo, xhi = xlo - 1, xhi + 1
    pw, ph = W - ML - MR, H - MT - MB

    def px(x):
        return ML + (x - xlo) / (xhi - xlo) * pw

    def py(v):
        return MT + ph - (v - ylo) / (yhi - ylo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
        f'<rect width="{W}" height="{H}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{ML + pw / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>')

    yticks = list(range(int(ylo), int(yhi) + 1)) if logy else _ticks(ylo, yhi)
    for t in yticks:
        y = py(t)
        label = f"1e{t}" if logy else f"{t:g}"
        out.append(f'<line x1="{ML}" y1="{y:.2f}" x2="{ML + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{ML - 6}" y="{y + 4:.2f}" text-anchor="end">{label}</text>')
    for t in _ticks(xlo, xhi):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{MT + ph}" x2="{x:.2f}" y2="{MT + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{x:.2f}" y="{MT + ph + 18}" text-anchor="middle">{t:g}</text>')
    out.append(f'<text x="{ML + pw / 2}" y="{H - 10}" text-anchor="middle">{escape(x_col)}</text>')
    out.append(f'<text x="16" y="{MT + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {MT + ph / 2})">{escape(y_col)}{" (log)" if logy else ""}</text>')

    for k, (key, pts) in enumerate(series.items()):
        color = PALETTE[k % len(PALETTE)]
        name = ", ".join(f"{c}={v}" for c, v in zip(series_cols, key)) or y_col
        good = [(x, y) for x, y in pts if not math.isnan(y)]
        coords = " ".join(f"{px(x):.2f},{py(ty(y)):.2f}" for x, y in good)
        out.append(f'<g class="series" data-name="{escape(name)}">')
        if coords:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        for x, y in good:
            fill = "#ffffff" if (logy and y <= 0) else color
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(ty(y)):.2f}" r="3" fill="{fill}" stroke="{color}"/>')
        out.append("</g>")
        ly = MT + 10 + 16 * k
        out.append(f'<line x1="{ML + pw + 12}" y1="{ly}" x2="{ML + pw + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ML + pw + 34}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
