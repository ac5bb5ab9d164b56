"""Minimal deterministic SVG line plots.

Hand-rolled on purpose: no plotting dependency, and identical input always
produces byte-identical output, so rendered scans can be diffed in CI.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["emit_plot_svg"]

_WIDTH, _HEIGHT = 960, 540
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 72, 24, 48, 56
_PALETTE = ("#000000", "#c62828", "#1565c0", "#2e7d32", "#ef6c00", "#6a1b9a")


def _ticks(lo: float, hi: float, n: int = 6) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    raw = (hi - lo) / max(n - 1, 1)
    magnitude = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * magnitude
        if step >= raw:
            break
    first = np.ceil(lo / step) * step
    ticks = np.arange(first, hi + step * 1e-9, step)
    return ticks[(ticks >= lo - step * 1e-9) & (ticks <= hi + step * 1e-9)]


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_plot_svg(x, series, path, *, xlabel: str = "", ylabel: str = "", title: str = "") -> None:
    """Render ``series`` (sequence of ``(label, values)``) against ``x``.

    Produces a self-contained SVG with one polyline per series, tick-labelled
    axes, and a legend naming every series.  Requires at least one series and
    equal lengths throughout.
    """
    x = np.asarray(x, dtype=float)
    if len(series) == 0:
        raise ValueError("need at least one series to plot")
    labels = [label for label, _ in series]
    arrays = [np.asarray(y, dtype=float) for _, y in series]
    for y in arrays:
        if y.shape != x.shape:
            raise ValueError("all series must have the same length as x")
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("x must be 1-D with at least 2 points")
    if not np.all(np.isfinite(x)) or not all(np.all(np.isfinite(y)) for y in arrays):
        raise ValueError("plot data must be finite")

    x_lo, x_hi = float(np.min(x)), float(np.max(x))
    y_lo = min(float(np.min(y)) for y in arrays)
    y_hi = max(float(np.max(y)) for y in arrays)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.04 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(value: float) -> float:
        return _MARGIN_L + (value - x_lo) / (x_hi - x_lo) * plot_w

    def py(value: float) -> float:
        return _MARGIN_T + (y_hi - value) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    font = 'font-family="Helvetica,Arial,sans-serif"'

    for tick in _ticks(x_lo, x_hi):
        tx = px(tick)
        parts.append(f'<line x1="{tx:.2f}" y1="{_MARGIN_T + plot_h}" x2="{tx:.2f}" '
                     f'y2="{_MARGIN_T + plot_h + 5}" stroke="#444444" stroke-width="1"/>')
        parts.append(f'<text x="{tx:.2f}" y="{_MARGIN_T + plot_h + 20}" {font} font-size="12" '
                     f'text-anchor="middle">{tick:.6g}</text>')
    for tick in _ticks(y_lo, y_hi):
        ty = py(tick)
        parts.append(f'<line x1="{_MARGIN_L - 5}" y1="{ty:.2f}" x2="{_MARGIN_L}" '
                     f'y2="{ty:.2f}" stroke="#444444" stroke-width="1"/>')
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{ty + 4:.2f}" {font} font-size="12" '
                     f'text-anchor="end">{tick:.6g}</text>')

    if title:
        parts.append(f'<text x="{_WIDTH / 2:.0f}" y="24" {font} font-size="16" '
                     f'text-anchor="middle">{_esc(title)}</text>')
    if xlabel:
        parts.append(f'<text x="{_MARGIN_L + plot_w / 2:.0f}" y="{_HEIGHT - 12}" {font} '
                     f'font-size="13" text-anchor="middle">{_esc(xlabel)}</text>')
    if ylabel:
        cy = _MARGIN_T + plot_h / 2
        parts.append(f'<text x="18" y="{cy:.0f}" {font} font-size="13" text-anchor="middle" '
                     f'transform="rotate(-90 18 {cy:.0f})">{_esc(ylabel)}</text>')

    for idx, (label, y) in enumerate(zip(labels, arrays)):
        color = _PALETTE[idx % len(_PALETTE)]
        points = " ".join(f"{px(xv):.2f},{py(yv):.2f}" for xv, yv in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.3" '
                     f'points="{points}"/>')

    legend_x = _MARGIN_L + plot_w - 150
    legend_y = _MARGIN_T + 10
    for idx, label in enumerate(labels):
        color = _PALETTE[idx % len(_PALETTE)]
        ly = legend_y + idx * 18
        parts.append(f'<line x1="{legend_x}" y1="{ly + 4}" x2="{legend_x + 24}" y2="{ly + 4}" '
                     f'stroke="{color}" stroke-width="2" class="legend"/>')
        parts.append(f'<text x="{legend_x + 30}" y="{ly + 8}" {font} font-size="12">'
                     f'{_esc(label)}</text>')

    parts.append("</svg>")
    data = "\n".join(parts) + "\n"
    try:
        Path(path).write_text(data, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG {path}: {exc}") from exc
