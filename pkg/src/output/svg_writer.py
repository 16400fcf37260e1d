"""Self-contained SVG 1.1 line charts."""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

from ..config.constants import SVG_HEIGHT, SVG_WIDTH
from ..exceptions import ExportError

MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50


@dataclass(frozen=True)
class Line:
    xs: np.ndarray
    ys: np.ndarray
    opacity: float = 1.0
    label: str = ""


def _padded(lo: float, hi: float) -> Tuple[float, float]:
    if hi - lo < 1e-12:
        return lo - 1.0, hi + 1.0
    return lo, hi


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def line_chart(lines: Sequence[Line], title: str, x_label: str = "", y_label: str = "") -> str:
    """Render lines on shared axes into an SVG document string."""
    plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    if lines:
        x_lo, x_hi = _padded(min(float(l.xs.min()) for l in lines), max(float(l.xs.max()) for l in lines))
        y_lo, y_hi = _padded(min(float(l.ys.min()) for l in lines), max(float(l.ys.max()) for l in lines))
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0

    def px(x):
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH / 2:.0f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black" stroke-width="1"/>',
    ]
    # tick labels at the axis ends
    bottom = MARGIN_TOP + plot_h
    parts += [
        f'<text x="{MARGIN_LEFT}" y="{bottom + 16}" font-family="sans-serif" font-size="11">{x_lo:.4g}</text>',
        f'<text x="{MARGIN_LEFT + plot_w}" y="{bottom + 16}" text-anchor="end" font-family="sans-serif" '
        f'font-size="11">{x_hi:.4g}</text>',
        f'<text x="{MARGIN_LEFT - 6}" y="{bottom}" text-anchor="end" font-family="sans-serif" '
        f'font-size="11">{y_lo:.4g}</text>',
        f'<text x="{MARGIN_LEFT - 6}" y="{MARGIN_TOP + 10}" text-anchor="end" font-family="sans-serif" '
        f'font-size="11">{y_hi:.4g}</text>',
    ]
    if x_label:
        parts.append(
            f'<text x="{MARGIN_LEFT + plot_w / 2:.0f}" y="{SVG_HEIGHT - 12}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{escape(x_label)}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="16" y="{MARGIN_TOP + plot_h / 2:.0f}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12" transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.0f})">{escape(y_label)}</text>'
        )

    for line in lines:
        points = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(line.xs, line.ys))
        title_tag = f"<title>{escape(line.label)}</title>" if line.label else ""
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="#1f4e9c" stroke-width="2" '
            f'stroke-opacity="{line.opacity:.3f}">{title_tag}</polyline>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path: Path, document: str) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(document)
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", path=path)
    return path
