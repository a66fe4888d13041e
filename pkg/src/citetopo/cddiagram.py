"""Critical-difference diagram layout and SVG rendering."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape


@dataclass(frozen=True)
class Tick:
    dataset: str
    rank: float
    side: str      # "left" or "right"
    level: int     # label row, 0 closest to the axis


@dataclass(frozen=True)
class CdDiagramLayout:
    axis_min: int
    axis_max: int
    ticks: tuple
    bars: tuple    # (start_rank, end_rank) per indistinguishable group
    cd: float


def cd_layout(mean_ranks, groups, cd):
    """
    Lay out a diagram for ``mean_ranks`` (``{dataset: rank}``) and the index
    groups produced by :func:`citetopo.compare.cd_groups`.
    """
    names = list(mean_ranks)
    ranks = [float(mean_ranks[d]) for d in names]
    N = len(names)
    order = sorted(range(N), key=lambda i: (ranks[i], i))
    half = math.ceil(N / 2)
    ticks = []
    for pos, i in enumerate(order):
        if pos < half:
            ticks.append(Tick(names[i], ranks[i], "left", pos))
        else:
            ticks.append(Tick(names[i], ranks[i], "right", N - 1 - pos))
    bars = tuple(
        (min(ranks[i] for i in g), max(ranks[i] for i in g)) for g in groups if len(g) > 1
    )
    return CdDiagramLayout(1, max(N, 2), tuple(ticks), bars, float(cd))


def render_svg(layout, width=640, title=None):
    """Deterministic SVG text for a :class:`CdDiagramLayout`."""
    margin = 140
    top = 60 if title else 40
    axis_w = width - 2 * margin
    lo, hi = layout.axis_min, layout.axis_max

    def x(rank):
        return margin + (rank - lo) / (hi - lo) * axis_w

    n_left = sum(t.side == "left" for t in layout.ticks)
    n_right = len(layout.ticks) - n_left
    bar_rows = len(layout.bars)
    label_top = top + 30 + 10 * bar_rows
    height = label_top + 22 * max(n_left, n_right, 1) + 20

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')
    # critical difference marker
    out.append(f'<line x1="{x(lo):.1f}" y1="{top - 22}" x2="{x(lo + layout.cd):.1f}" '
               f'y2="{top - 22}" stroke="black" stroke-width="2"/>')
    out.append(f'<text x="{(x(lo) + x(lo + layout.cd)) / 2:.1f}" y="{top - 27}" '
               f'text-anchor="middle">CD = {layout.cd:.3f}</text>')
    # axis
    out.append(f'<line x1="{x(lo):.1f}" y1="{top}" x2="{x(hi):.1f}" y2="{top}" '
               f'stroke="black"/>')
    for r in range(lo, hi + 1):
        out.append(f'<line x1="{x(r):.1f}" y1="{top}" x2="{x(r):.1f}" y2="{top - 6}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{x(r):.1f}" y="{top - 9}" text-anchor="middle">{r}</text>')
    # dataset labels
    for t in layout.ticks:
        y = label_top + 22 * t.level
        xr = x(t.rank)
        xe = margin - 10 if t.side == "left" else width - margin + 10
        anchor = "end" if t.side == "left" else "start"
        out.append(f'<polyline points="{xr:.1f},{top} {xr:.1f},{y} {xe:.1f},{y}" '
                   f'fill="none" stroke="black"/>')
        tx = xe - 4 if t.side == "left" else xe + 4
        out.append(f'<text x="{tx:.1f}" y="{y + 4}" text-anchor="{anchor}">'
                   f'{escape(t.dataset)} ({t.rank:.2f})</text>')
    # group bars
    for k, (a, b) in enumerate(layout.bars):
        y = top + 14 + 10 * k
        out.append(f'<line x1="{x(a) - 4:.1f}" y1="{y}" x2="{x(b) + 4:.1f}" y2="{y}" '
                   f'stroke="black" stroke-width="4"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
