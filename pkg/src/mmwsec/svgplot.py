"""Minimal self-contained SVG line charts (static, deterministic output)."""

from __future__ import annotations

import math

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
WIDTH, HEIGHT = 720, 460
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 28, 48


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(round(t, 12))
        t += step
    return out


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def line_plot(
    x: list[float],
    series: dict[str, list[float]],
    xlabel: str,
    ylabel: str,
    title: str = "",
    log_y: bool = False,
) -> str:
    """Render one or more y-series against a shared x axis. Non-finite points
    (and non-positive ones on a log axis) break the polyline."""

    def usable(v: float) -> bool:
        return math.isfinite(v) and (not log_y or v > 0.0)

    ys = [v for vals in series.values() for v in vals if usable(v)]
    xs = [v for v in x if math.isfinite(v)]
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0.0, 1.0)
    y_lo, y_hi = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if log_y:
        y_lo, y_hi = math.log10(y_lo), math.log10(y_hi)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(v: float) -> float:
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v: float) -> float:
        vv = math.log10(v) if log_y else v
        return MARGIN_T + (y_hi - vv) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="#333"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2}" y="{MARGIN_T - 10}" text-anchor="middle" '
            f'font-size="14">{title}</text>'
        )

    for t in _ticks(x_lo, x_hi):
        xp = px(t)
        parts.append(f'<line x1="{xp:.1f}" y1="{MARGIN_T + ph}" x2="{xp:.1f}" '
                     f'y2="{MARGIN_T + ph + 5}" stroke="#333"/>')
        parts.append(f'<text x="{xp:.1f}" y="{MARGIN_T + ph + 18}" '
                     f'text-anchor="middle">{_fmt(t)}</text>')
    y_ticks = _ticks(y_lo, y_hi)
    for t in y_ticks:
        yp = MARGIN_T + (y_hi - t) / (y_hi - y_lo) * ph
        label = _fmt(10.0**t) if log_y else _fmt(t)
        parts.append(f'<line x1="{MARGIN_L - 5}" y1="{yp:.1f}" x2="{MARGIN_L}" '
                     f'y2="{yp:.1f}" stroke="#333"/>')
        parts.append(f'<text x="{MARGIN_L - 8}" y="{yp + 4:.1f}" text-anchor="end">{label}</text>')
    parts.append(f'<text x="{MARGIN_L + pw / 2}" y="{HEIGHT - 10}" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="16" y="{MARGIN_T + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {MARGIN_T + ph / 2})">{ylabel}</text>')

    for i, (label, vals) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        segments, seg = [], []
        for xv, yv in zip(x, vals):
            if math.isfinite(xv) and usable(yv):
                seg.append(f"{px(xv):.2f},{py(yv):.2f}")
            elif seg:
                segments.append(seg)
                seg = []
        if seg:
            segments.append(seg)
        for seg in segments:
            if len(seg) > 1:
                parts.append(f'<polyline points="{" ".join(seg)}" fill="none" '
                             f'stroke="{color}" stroke-width="1.5"/>')
            elif len(seg) == 1:
                cx, cy = seg[0].split(",")
                parts.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>')
        ly = MARGIN_T + 16 + 16 * i
        parts.append(f'<line x1="{MARGIN_L + pw - 150}" y1="{ly - 4}" '
                     f'x2="{MARGIN_L + pw - 126}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{MARGIN_L + pw - 120}" y="{ly}">{label}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
