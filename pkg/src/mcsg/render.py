"""Deterministic SVG rendering of instances and solutions.

Points are filled disks colored by their color set, edges are segments
colored by the shared colors of their endpoints, following the usual
three-color display conventions (red/blue/yellow primaries; green, orange,
purple for the pairs; black for all three).  Identical inputs produce
byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Instance, Solution, as_edges

PALETTE3 = {
    0b001: "red",
    0b010: "blue",
    0b100: "gold",
    0b110: "green",
    0b101: "orange",
    0b011: "purple",
    0b111: "black",
}


def _auto_palette(k: int) -> dict[int, str]:
    masks = list(range(1, 1 << k))
    out = {}
    for i, m in enumerate(masks):
        hue = round(360 * i / len(masks))
        out[m] = f"hsl({hue},70%,40%)"
    return out


@dataclass(frozen=True)
class RenderStyle:
    """Display options; the default color map covers every set for k <= 3."""

    point_radius: float = 0.012
    stroke_width: float = 0.006
    margin: float = 0.05
    colors: dict[int, str] = field(default_factory=dict)

    def color_of(self, mask: int, k: int) -> str:
        if mask in self.colors:
            return self.colors[mask]
        if k <= 3:
            return PALETTE3.get(mask, "#888888")
        return _auto_palette(k).get(mask, "#888888")


def _fmt(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".")


def render_svg(inst: Instance, sol: Solution | None = None, style: RenderStyle | None = None) -> bytes:
    """Render an instance (and optionally a solution's edges) as SVG bytes."""
    style = style or RenderStyle()
    xs, ys = inst.xy[:, 0], inst.xy[:, 1]
    span = max(float(xs.max() - xs.min()), float(ys.max() - ys.min()), 1e-9)
    margin = style.margin * span
    r = max(style.point_radius * span, 1e-9)
    sw = max(style.stroke_width * span, 1e-9)
    x0, y0 = float(xs.min()) - margin, float(ys.min()) - margin
    x1, y1 = float(xs.max()) + margin, float(ys.max()) + margin

    def sx(x: float) -> str:
        return _fmt(x)

    def sy(y: float) -> str:
        return _fmt(y0 + y1 - y)  # flip so +y points up

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(y0)} '
        f'{_fmt(x1 - x0)} {_fmt(y1 - y0)}">',
    ]
    if sol is not None:
        for a, b in as_edges(sol.edges, inst.n):
            mask = int(inst.masks[a] & inst.masks[b])
            color = style.color_of(mask, inst.k) if mask else "#999999"
            lines.append(
                f'<line x1="{sx(inst.xy[a, 0])}" y1="{sy(inst.xy[a, 1])}" '
                f'x2="{sx(inst.xy[b, 0])}" y2="{sy(inst.xy[b, 1])}" '
                f'stroke="{color}" stroke-width="{_fmt(sw)}"/>'
            )
    for i in range(inst.n):
        color = style.color_of(int(inst.masks[i]), inst.k)
        lines.append(
            f'<circle cx="{sx(inst.xy[i, 0])}" cy="{sy(inst.xy[i, 1])}" '
            f'r="{_fmt(r)}" fill="{color}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines).encode("utf-8")
