"""Time-position figures: one SVG per document.

The scene mirrors the analysis: author-colored dots per edit, a vertical
blue line where each session starts and a red one where it ends, and one
rectangle per time-position cluster. Rectangles are reserved for
clusters so a count of <rect> elements equals the cluster count.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clustering import Window, clusterize
from .log_model import EditLog
from .segmentation import segment

DEFAULT_WINDOW = Window(300_000, 400)

_PALETTE = (
    "#e6812f",
    "#2e9e4f",
    "#3b6fd4",
    "#c23bd4",
    "#d43b3b",
    "#2fbfbf",
    "#8a6d3b",
    "#6d8a3b",
)


@dataclass(frozen=True)
class Scene:
    """Figure-ready view of one document, times in seconds from doc start."""

    doc_id: str
    dots: tuple[tuple[float, int, int], ...]
    sessions: tuple[tuple[float, float], ...]
    clusters: tuple[tuple[float, float, int, int], ...]
    authors: tuple[str, ...]


def build_scene(log: EditLog, gap_ms: int, window: Window = DEFAULT_WINDOW) -> Scene:
    """Segment, clusterize, and color one normalized document."""
    if len(log) == 0:
        return Scene(log.doc_id, (), (), (), ())
    t0 = int(log.ts[0])

    def rel(ts: int) -> float:
        return (ts - t0) / 1000.0

    dots = tuple(
        (rel(int(log.ts[i])), int(log.pos[i]), int(log.author_codes[i]))
        for i in range(len(log))
    )
    sessions = []
    clusters = []
    for session in segment(log, gap_ms):
        sessions.append((rel(session.start_ts), rel(session.end_ts)))
        for c in clusterize(session, window):
            clusters.append((rel(c.ts_min), rel(c.ts_max), c.pos_min, c.pos_max))
    return Scene(log.doc_id, dots, tuple(sessions), tuple(clusters), log.author_names)


def render_svg(scene: Scene, width: int = 900, height: int = 500) -> str:
    """Valid SVG 1.1; affine data-to-pixel mapping with 5% margins."""
    if width <= 0 or height <= 0:
        raise ValueError("dimensions must be positive")
    mx = width * 0.05
    my = height * 0.05
    t_values = [t for t, _, _ in scene.dots]
    p_values = [p for _, p, _ in scene.dots]
    t_lo, t_hi = (min(t_values), max(t_values)) if t_values else (0.0, 1.0)
    p_lo, p_hi = (min(p_values), max(p_values)) if p_values else (0, 1)
    if t_hi <= t_lo:
        t_hi = t_lo + 1.0
    if p_hi <= p_lo:
        p_hi = p_lo + 1
    t_span = t_hi - t_lo
    p_span = p_hi - p_lo

    def x(t: float) -> str:
        return f"{mx + (t - t_lo) / t_span * (width - 2 * mx):.2f}"

    def y(p: float) -> str:
        return f"{height - my - (p - p_lo) / p_span * (height - 2 * my):.2f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<title>{_escape(scene.doc_id)}</title>',
        f'<line x1="{mx:.2f}" y1="{height - my:.2f}" x2="{width - mx:.2f}" '
        f'y2="{height - my:.2f}" stroke="#444444" stroke-width="1"/>',
        f'<line x1="{mx:.2f}" y1="{my:.2f}" x2="{mx:.2f}" '
        f'y2="{height - my:.2f}" stroke="#444444" stroke-width="1"/>',
        f'<text x="{width / 2:.2f}" y="{height - my / 4:.2f}" font-size="12" '
        f'text-anchor="middle" fill="#444444">time (s)</text>',
        f'<text x="{mx / 3:.2f}" y="{height / 2:.2f}" font-size="12" '
        f'text-anchor="middle" fill="#444444" '
        f'transform="rotate(-90 {mx / 3:.2f} {height / 2:.2f})">position (c)</text>',
    ]
    for t_min, t_max, pos_min, pos_max in scene.clusters:
        x0, x1 = x(t_min), x(t_max)
        y1, y0 = y(pos_min), y(pos_max)
        w = max(float(x1) - float(x0), 2.0)
        h = max(float(y1) - float(y0), 2.0)
        parts.append(
            f'<rect x="{float(x0) - 1:.2f}" y="{float(y0) - 1:.2f}" '
            f'width="{w + 2:.2f}" height="{h + 2:.2f}" fill="#aee0f2" '
            f'fill-opacity="0.45" stroke="#5aa8c8" stroke-width="1"/>'
        )
    for start, end in scene.sessions:
        parts.append(
            f'<line x1="{x(start)}" y1="{my:.2f}" x2="{x(start)}" '
            f'y2="{height - my:.2f}" stroke="#2255cc" stroke-width="1"/>'
        )
        parts.append(
            f'<line x1="{x(end)}" y1="{my:.2f}" x2="{x(end)}" '
            f'y2="{height - my:.2f}" stroke="#cc3322" stroke-width="1" '
            f'stroke-dasharray="4 2"/>'
        )
    for t, p, color in scene.dots:
        parts.append(
            f'<circle cx="{x(t)}" cy="{y(p)}" r="3" '
            f'fill="{_PALETTE[color % len(_PALETTE)]}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )
