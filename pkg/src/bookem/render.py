"""SVG arc diagrams: the spine is a horizontal line, edges are half circles
above it, colored by page.  Edges taking part in a reported violation are
drawn dashed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .embedding import LinearEmbedding, verify

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
)


@dataclass
class RenderSpec:
    width: Optional[int] = None
    height: Optional[int] = None
    palette: tuple[str, ...] = field(default=PALETTE)
    margin: int = 20
    vertex_radius: float = 4.0
    labels: bool = True


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def render(emb: LinearEmbedding, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec()
    n = emb.graph.n
    margin = spec.margin
    width = spec.width or max(2 * margin + 40 * max(n - 1, 1), 120)
    gap = (width - 2 * margin) / max(n - 1, 1)
    x_of = [0.0] * n
    for i, v in enumerate(emb.spine.order):
        x_of[v] = margin + (i * gap if n > 1 else (width - 2 * margin) / 2)
    longest = max((abs(x_of[u] - x_of[v]) for u, v in emb.graph.edges), default=0.0)
    height = spec.height or int(longest / 2 + 2 * margin + 16)
    base = height - margin - (12 if spec.labels else 0)
    # arcs must stay inside the canvas, so flatten them if the height is fixed and too small
    scale = min(1.0, (base - margin / 2) / (longest / 2)) if longest else 1.0

    dashed = set()
    for e, f, _, _ in verify(emb).violations:
        dashed.add(e)
        dashed.add(f)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg version="1.1" xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{_fmt(margin / 2)}" y1="{_fmt(base)}" x2="{_fmt(width - margin / 2)}" y2="{_fmt(base)}" '
        'stroke="#000000" stroke-width="1"/>',
    ]
    for e, p in zip(emb.graph.edges, emb.assignment):
        a, b = sorted((x_of[e[0]], x_of[e[1]]))
        rx = (b - a) / 2
        ry = rx * scale
        color = spec.palette[p % len(spec.palette)]
        dash = ' stroke-dasharray="4 3"' if e in dashed else ""
        out.append(
            f'<path d="M {_fmt(a)} {_fmt(base)} A {_fmt(rx)} {_fmt(ry)} 0 0 1 {_fmt(b)} {_fmt(base)}" '
            f'fill="none" stroke="{color}" stroke-width="1.5"{dash} data-page="{p}" data-edge="{e[0]}-{e[1]}"/>'
        )
    for v in emb.spine.order:
        out.append(f'<circle cx="{_fmt(x_of[v])}" cy="{_fmt(base)}" r="{_fmt(spec.vertex_radius)}" fill="#000000"/>')
        if spec.labels:
            out.append(
                f'<text x="{_fmt(x_of[v])}" y="{_fmt(base + 16)}" font-size="10" text-anchor="middle">{v}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
