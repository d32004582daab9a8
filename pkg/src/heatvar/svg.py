"""Minimal deterministic SVG line charts.

Hand-rolled on purpose: the output is a pure function of the input data
(fixed palette, fixed layout, fixed number formatting), so repeated runs are
byte-identical, which the reproduction harness asserts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

_PALETTE = ["#bbbbbb", "#777777", "#333333", "#1f77b4", "#d62728", "#2ca02c"]

_W, _H = 460, 340
_ML, _MR, _MT, _MB = 64, 14, 30, 46


@dataclass
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: list  # (label, xs, ys)
    hline: Optional[float] = None
    logx: bool = False
    logy: bool = False


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 5):
    if not math.isfinite(lo) or not math.isfinite(hi) or hi <= lo:
        return [lo]
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return ticks


def _log_ticks(lo: float, hi: float):
    lo_e = math.floor(math.log10(lo))
    hi_e = math.ceil(math.log10(hi))
    return [10.0**e for e in range(lo_e, hi_e + 1) if lo <= 10.0**e <= hi]


def _panel_svg(panel: Panel, x_off: float) -> list[str]:
    xs_all = [x for _, xs, _ in panel.series for x in xs]
    ys_all = [y for _, _, ys in panel.series for y in ys]
    if panel.hline is not None:
        ys_all = ys_all + [panel.hline]
    if not xs_all or not ys_all:
        raise ValueError("empty series")

    def xt(v):
        return math.log10(v) if panel.logx else v

    def yt(v):
        return math.log10(v) if panel.logy else v

    x_lo, x_hi = min(map(xt, xs_all)), max(map(xt, xs_all))
    y_lo, y_hi = min(map(yt, ys_all)), max(map(yt, ys_all))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.06 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    iw = _W - _ML - _MR
    ih = _H - _MT - _MB

    def px(v):
        return x_off + _ML + iw * (xt(v) - x_lo) / (x_hi - x_lo)

    def py(v):
        return _MT + ih * (1.0 - (yt(v) - y_lo) / (y_hi - y_lo))

    out = []
    out.append(
        f'<rect x="{_fmt(x_off + _ML)}" y="{_MT}" width="{iw}" height="{ih}" '
        'fill="none" stroke="#000000" stroke-width="1"/>'
    )
    xticks = _log_ticks(min(xs_all), max(xs_all)) if panel.logx else _nice_ticks(x_lo, x_hi)
    for tv in xticks:
        tx = px(tv)
        out.append(
            f'<line x1="{_fmt(tx)}" y1="{_fmt(_MT + ih)}" x2="{_fmt(tx)}" '
            f'y2="{_fmt(_MT + ih + 4)}" stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(tx)}" y="{_fmt(_MT + ih + 16)}" font-size="10" '
            f'text-anchor="middle">{_fmt(tv)}</text>'
        )
    yticks = _log_ticks(10 ** y_lo, 10 ** y_hi) if panel.logy else _nice_ticks(y_lo, y_hi)
    for tv in yticks:
        ty = py(tv)
        out.append(
            f'<line x1="{_fmt(x_off + _ML - 4)}" y1="{_fmt(ty)}" x2="{_fmt(x_off + _ML)}" '
            f'y2="{_fmt(ty)}" stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x_off + _ML - 7)}" y="{_fmt(ty + 3)}" font-size="10" '
            f'text-anchor="end">{_fmt(tv)}</text>'
        )
    if panel.hline is not None:
        hy = py(panel.hline)
        out.append(
            f'<line x1="{_fmt(x_off + _ML)}" y1="{_fmt(hy)}" x2="{_fmt(x_off + _ML + iw)}" '
            f'y2="{_fmt(hy)}" stroke="#000000" stroke-width="1" stroke-dasharray="5,3"/>'
        )
    for i, (label, xs, ys) in enumerate(panel.series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = _MT + 14 + 13 * i
        lx = x_off + _ML + iw - 6
        out.append(
            f'<line x1="{_fmt(lx - 28)}" y1="{_fmt(ly - 4)}" x2="{_fmt(lx - 10)}" '
            f'y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{_fmt(lx - 32)}" y="{_fmt(ly)}" font-size="10" '
            f'text-anchor="end">{label}</text>'
        )
    out.append(
        f'<text x="{_fmt(x_off + _ML + iw / 2)}" y="{_fmt(_MT - 10)}" font-size="12" '
        f'text-anchor="middle">{panel.title}</text>'
    )
    out.append(
        f'<text x="{_fmt(x_off + _ML + iw / 2)}" y="{_fmt(_MT + ih + 34)}" font-size="11" '
        f'text-anchor="middle">{panel.xlabel}</text>'
    )
    out.append(
        f'<text x="{_fmt(x_off + 14)}" y="{_fmt(_MT + ih / 2)}" font-size="11" '
        f'text-anchor="middle" transform="rotate(-90 {_fmt(x_off + 14)} '
        f'{_fmt(_MT + ih / 2)})">{panel.ylabel}</text>'
    )
    return out


def render_svg(panels: Sequence[Panel]) -> str:
    """Side-by-side panels as one SVG document string."""
    if not panels:
        raise ValueError("need at least one panel")
    width = _W * len(panels)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{_H}" '
        f'viewBox="0 0 {width} {_H}" font-family="Helvetica,Arial,sans-serif">',
        f'<rect width="{width}" height="{_H}" fill="#ffffff"/>',
    ]
    for i, panel in enumerate(panels):
        parts.extend(_panel_svg(panel, _W * i))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
