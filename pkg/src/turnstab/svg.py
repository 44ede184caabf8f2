"""Minimal hand-emitted SVG rendering of sampled boundary branches.

The diagrams are verification aids only; the CSV output is the contract.
No plotting dependency: plain polylines over a framed axes box with a few
labelled ticks.
"""

from __future__ import annotations

import math

from .errors import DomainError

_WIDTH, _HEIGHT = 640.0, 480.0
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 62.0, 18.0, 18.0, 46.0

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi]."""
    span = hi - lo
    raw = span / (count - 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mag * mult >= raw:
            step = mag * mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * span:
        out.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return out


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_lobes(
    branches,
    x_range: tuple[float, float],
    y_range: tuple[float, float],
    x_label: str = "delta",
    y_label: str = "h",
    title: str = "",
) -> str:
    """Render branches (each with .points of (beta, delta, h)) to SVG markup."""
    x_lo, x_hi = x_range
    y_lo, y_hi = y_range
    if not (x_hi > x_lo and y_hi > y_lo):
        raise DomainError("axis ranges must be nonempty")

    px_w = _WIDTH - _MARGIN_L - _MARGIN_R
    px_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def to_px(x: float, y: float) -> tuple[float, float]:
        return (
            _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * px_w,
            _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * px_h,
        )

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" '
        f'height="{_HEIGHT:.0f}" viewBox="0 0 {_WIDTH:.0f} {_HEIGHT:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{px_w}" height="{px_h}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]

    for tx in _ticks(x_lo, x_hi):
        px, _ = to_px(tx, y_lo)
        y0 = _MARGIN_T + px_h
        out.append(f'<line x1="{px:.2f}" y1="{y0:.2f}" x2="{px:.2f}" y2="{y0 + 5:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{px:.2f}" y="{y0 + 18:.2f}" font-size="11" '
            f'text-anchor="middle">{_fmt(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        _, py = to_px(x_lo, ty)
        out.append(f'<line x1="{_MARGIN_L - 5:.2f}" y1="{py:.2f}" x2="{_MARGIN_L:.2f}" y2="{py:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{_MARGIN_L - 8:.2f}" y="{py + 4:.2f}" font-size="11" '
            f'text-anchor="end">{_fmt(ty)}</text>'
        )

    # zero axes, if inside the window
    if y_lo < 0.0 < y_hi:
        _, py = to_px(x_lo, 0.0)
        out.append(
            f'<line x1="{_MARGIN_L:.2f}" y1="{py:.2f}" x2="{_MARGIN_L + px_w:.2f}" '
            f'y2="{py:.2f}" stroke="#999999" stroke-dasharray="4 3"/>'
        )

    out.append(
        f'<text x="{_MARGIN_L + px_w / 2:.2f}" y="{_HEIGHT - 8:.2f}" font-size="13" '
        f'text-anchor="middle">{x_label}</text>'
    )
    out.append(
        f'<text x="14" y="{_MARGIN_T + px_h / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 14 {_MARGIN_T + px_h / 2:.2f})">{y_label}</text>'
    )
    if title:
        out.append(
            f'<text x="{_MARGIN_L + px_w / 2:.2f}" y="13" font-size="12" '
            f'text-anchor="middle">{title}</text>'
        )

    pad_x = 0.02 * (x_hi - x_lo)
    pad_y = 0.02 * (y_hi - y_lo)
    for idx, br in enumerate(branches):
        color = _COLORS[idx % len(_COLORS)]
        segments: list[list[str]] = [[]]
        for _, delta, h in br.points:
            inside = (
                x_lo - pad_x <= delta <= x_hi + pad_x
                and y_lo - pad_y <= h <= y_hi + pad_y
            )
            if inside:
                px, py = to_px(delta, h)
                segments[-1].append(f"{px:.2f},{py:.2f}")
            elif segments[-1]:
                segments.append([])
        for seg in segments:
            if len(seg) >= 2:
                out.append(
                    f'<polyline points="{" ".join(seg)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"
