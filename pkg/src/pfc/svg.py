"""Minimal static SVG renderer for sweep-series tables.

Emits self-contained SVG with one group per series, polyline plus markers,
following the figure conventions: circles for estimator means, crosses for
the unsupervised baseline, triangles and pluses for quantiles and bound
curves. No plotting dependency is involved and output is deterministic.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

WIDTH = 640
HEIGHT = 440
MARGIN_LEFT = 72
MARGIN_RIGHT = 28
MARGIN_TOP = 44
MARGIN_BOTTOM = 64

_CIRCLE = "circle"
_CROSS = "cross"
_PLUS = "plus"
_TRIANGLE = "triangle"

_MARKERS = {
    "mean": _CIRCLE,
    "q05": _PLUS,
    "q95": _TRIANGLE,
    "eq11": _PLUS,
    "eq12": _TRIANGLE,
    "pc_mean": _CROSS,
    "pc_q05": _PLUS,
    "pc_q95": _TRIANGLE,
}


def _marker_for(series: str) -> str:
    if series in _MARKERS:
        return _MARKERS[series]
    for suffix, marker in (("_mean", _CIRCLE), ("_q05", _PLUS), ("_q95", _TRIANGLE)):
        if series.endswith(suffix):
            return _MARKERS.get(series, marker)
    return _CIRCLE


def _fmt(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def _tick_label(x: float) -> str:
    return f"{x:g}"


def _marker_svg(kind: str, x: float, y: float) -> str:
    s = 4.5
    if kind == _CIRCLE:
        return (f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(s)}" '
                'fill="white" stroke="black" stroke-width="1.2"/>')
    if kind == _CROSS:
        return (f'<path d="M {_fmt(x - s)} {_fmt(y - s)} L {_fmt(x + s)} {_fmt(y + s)} '
                f'M {_fmt(x - s)} {_fmt(y + s)} L {_fmt(x + s)} {_fmt(y - s)}" '
                'stroke="black" stroke-width="1.2" fill="none"/>')
    if kind == _PLUS:
        return (f'<path d="M {_fmt(x - s)} {_fmt(y)} L {_fmt(x + s)} {_fmt(y)} '
                f'M {_fmt(x)} {_fmt(y - s)} L {_fmt(x)} {_fmt(y + s)}" '
                'stroke="black" stroke-width="1.2" fill="none"/>')
    points = (f"{_fmt(x)},{_fmt(y - s)} {_fmt(x - s)},{_fmt(y + s)} "
              f"{_fmt(x + s)},{_fmt(y + s)}")
    return (f'<polygon points="{points}" fill="white" stroke="black" '
            'stroke-width="1.2"/>')


def render_panel(table, title: str = "", xlabel: str = "",
                 ylabel: str = "angle (degrees)") -> str:
    """Render a SeriesTable to an SVG document string."""
    values = sorted({row.sweep_value for row in table.rows})
    if not values:
        raise ValueError("cannot render an empty table")
    series_names = []
    for row in table.rows:
        if row.series not in series_names:
            series_names.append(row.series)

    x_lo, x_hi = min(values), max(values)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    pad = 0.06 * (x_hi - x_lo)
    x_lo, x_hi = x_lo - pad, x_hi + pad
    y_max_data = max(row.angle_deg for row in table.rows)
    y_hi = min(90.0, 10.0 * math.ceil(max(y_max_data, 1.0) / 10.0))
    y_lo = 0.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(v: float) -> float:
        return MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.0f}" y="{MARGIN_TOP - 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15">{escape(title)}</text>'
        )

    bottom = MARGIN_TOP + plot_h
    for v in sorted(values):
        x = sx(v)
        parts.append(
            f'<line class="xtick" x1="{_fmt(x)}" y1="{bottom}" x2="{_fmt(x)}" '
            f'y2="{bottom + 6}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{bottom + 22}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_tick_label(v)}</text>'
        )
    n_yticks = 6
    for i in range(n_yticks + 1):
        v = y_lo + (y_hi - y_lo) * i / n_yticks
        y = sy(v)
        parts.append(
            f'<line class="ytick" x1="{MARGIN_LEFT - 6}" y1="{_fmt(y)}" '
            f'x2="{MARGIN_LEFT}" y2="{_fmt(y)}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 10}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{_tick_label(round(v, 2))}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{MARGIN_LEFT + plot_w / 2:.0f}" y="{HEIGHT - 18}" '
            'text-anchor="middle" font-family="sans-serif" '
            f'font-size="14">{escape(xlabel)}</text>'
        )
    if ylabel:
        x_label = 20
        y_label = MARGIN_TOP + plot_h / 2
        parts.append(
            f'<text x="{x_label}" y="{y_label:.0f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14" '
            f'transform="rotate(-90 {x_label} {y_label:.0f})">{escape(ylabel)}</text>'
        )

    for name in series_names:
        rows = [r for r in table.rows if r.series == name]
        rows.sort(key=lambda r: r.sweep_value)
        pts = [(sx(r.sweep_value), sy(min(r.angle_deg, y_hi))) for r in rows]
        poly = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        marker = _marker_for(name)
        group = [f'<g class="series" data-name={quoteattr(name)}>']
        if len(pts) > 1:
            group.append(
                f'<polyline points="{poly}" fill="none" stroke="black" '
                'stroke-width="0.8" stroke-dasharray="3,3"/>'
            )
        for x, y in pts:
            group.append(_marker_svg(marker, x, y))
        group.append("</g>")
        parts.append("".join(group))

    parts.append("</svg>")
    return "\n".join(parts)
