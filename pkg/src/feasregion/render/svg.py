"""SVG pictures of planar imputed regions.

Observations are dots with x^0 highlighted, known rows are dotted, imputed
rows are dashed and the region is shaded. The viewport is the observation
box plus a 20% margin; a region reaching past it is hatched.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np

from feasregion.contracts.errors import DimensionMismatchError, EmptyRegionError
from feasregion.contracts.geometry import ConstraintRow, ObservationSet
from feasregion.contracts.reports import ImputedRegion
from feasregion.geometry import region_vertices_2d
from feasregion.geometry.polygon import Viewport

MARGIN = 0.2
SIZE = 480


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def observation_viewport(obs: ObservationSet) -> Viewport:
    X = obs.matrix
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = np.where(hi - lo > 0.0, hi - lo, 1.0)
    lo, hi = lo - MARGIN * span, hi + MARGIN * span
    return float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1])


def _doubled(viewport: Viewport) -> Viewport:
    xmin, xmax, ymin, ymax = viewport
    dx, dy = (xmax - xmin) / 2.0, (ymax - ymin) / 2.0
    return xmin - dx, xmax + dx, ymin - dy, ymax + dy


def clip_row(row: ConstraintRow, viewport: Viewport) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """End points of the line ``a . x = b`` inside the viewport, or None."""
    xmin, xmax, ymin, ymax = viewport
    a1, a2 = row.a
    points = []
    if abs(a2) > 1e-12:
        for x in (xmin, xmax):
            points.append((x, (row.b - a1 * x) / a2))
    if abs(a1) > 1e-12:
        for y in (ymin, ymax):
            points.append(((row.b - a2 * y) / a1, y))
    tol = 1e-9 * max(1.0, xmax - xmin, ymax - ymin)
    inside = [
        np.array(p) for p in points
        if xmin - tol <= p[0] <= xmax + tol and ymin - tol <= p[1] <= ymax + tol
    ]
    if len(inside) < 2:
        return None
    inside.sort(key=lambda p: (p[0], p[1]))
    return inside[0], inside[-1]


class _Canvas:
    def __init__(self, viewport: Viewport, size: int):
        self.viewport = viewport
        self.size = size

    def xy(self, point) -> tuple[str, str]:
        xmin, xmax, ymin, ymax = self.viewport
        px = (point[0] - xmin) / (xmax - xmin) * self.size
        py = self.size - (point[1] - ymin) / (ymax - ymin) * self.size
        return _fmt(px), _fmt(py)


def _line(canvas: _Canvas, row: ConstraintRow, css: str, label: str = "") -> list[str]:
    ends = clip_row(row, canvas.viewport)
    if ends is None:
        return []
    (x1, y1), (x2, y2) = canvas.xy(ends[0]), canvas.xy(ends[1])
    out = [f'<line class="{css}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>']
    if label:
        out.append(f'<text class="label" x="{x2}" y="{y2}">{label}</text>')
    return out


def render_region_svg(
    region: ImputedRegion, observations: ObservationSet, size: int = SIZE
) -> str:
    """Draw a two-dimensional region and its observations as an SVG document."""
    if region.n != 2 or observations.n != 2:
        raise DimensionMismatchError("plots are only drawn for n = 2", n=region.n)

    viewport = observation_viewport(observations)
    canvas = _Canvas(viewport, size)
    polyhedron = region.region()

    polygon: list[tuple[float, float]] = []
    hatched = False
    try:
        polygon = region_vertices_2d(polyhedron, viewport)
        xmin, xmax, ymin, ymax = viewport
        tol = 1e-7 * max(1.0, xmax - xmin, ymax - ymin)
        hatched = any(
            not (xmin - tol <= x <= xmax + tol and ymin - tol <= y <= ymax + tol)
            for x, y in region_vertices_2d(polyhedron, _doubled(viewport))
        )
    except EmptyRegionError:
        pass

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        "<defs>",
        '<pattern id="hatch" width="8" height="8" patternUnits="userSpaceOnUse" '
        'patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" '
        'stroke="#7a9cc6" stroke-width="2"/></pattern>',
        "<style>"
        ".region{fill:#cfe0f5;stroke:none}"
        ".hatch{fill:url(#hatch);stroke:none}"
        ".known{stroke:#555;stroke-width:1.5;stroke-dasharray:2,3}"
        ".imputed{stroke:#c0392b;stroke-width:1.5;stroke-dasharray:6,4}"
        ".obs{fill:#222}"
        ".x0{fill:#e67e22;stroke:#222;stroke-width:1}"
        ".label{font:11px sans-serif;fill:#333}"
        "</style>",
        "</defs>",
    ]

    if polygon:
        points = " ".join(",".join(canvas.xy(v)) for v in polygon)
        parts.append(f'<polygon class="region" points="{points}"/>')
        if hatched:
            parts.append(f'<polygon class="hatch" points="{points}"/>')
            parts.append('<text class="label" x="4" y="14">region extends beyond view</text>')

    for row in region.known_set.rows:
        parts.extend(_line(canvas, row, "known"))

    drawn: list[tuple[ConstraintRow, int]] = []
    for row in region.imputed_rows:
        for i, (seen, count) in enumerate(drawn):
            if np.allclose(seen.a, row.a, atol=1e-9) and abs(seen.b - row.b) <= 1e-9:
                drawn[i] = (seen, count + 1)
                break
        else:
            drawn.append((row, 1))
    for row, count in drawn:
        parts.extend(_line(canvas, row, "imputed", f"({count}×)" if count > 1 else ""))

    for k, point in enumerate(observations.points):
        cx, cy = canvas.xy(point)
        if k == observations.preferred_index:
            parts.append(f'<circle class="x0" cx="{cx}" cy="{cy}" r="5"/>')
        else:
            parts.append(f'<circle class="obs" cx="{cx}" cy="{cy}" r="3"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(
    path: Union[str, Path], region: ImputedRegion, observations: ObservationSet
) -> None:
    Path(path).write_text(render_region_svg(region, observations), encoding="utf-8")
