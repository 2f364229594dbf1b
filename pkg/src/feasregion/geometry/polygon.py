"""Vertex extraction for two-dimensional polyhedra."""

import itertools
import math
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.errors import DimensionMismatchError, EmptyRegionError, UnboundedRegionError
from feasregion.contracts.geometry import ConstraintRow, Polyhedron
from feasregion.contracts.solver import Relation, SolveStatus
from feasregion.engine import ModelBuilder, dot, solve_lp

Viewport = tuple[float, float, float, float]

_DEDUP_TOL = 1e-7


def viewport_rows(viewport: Viewport) -> list[ConstraintRow]:
    """Rows of the box ``xmin <= x1 <= xmax, ymin <= x2 <= ymax``."""
    xmin, xmax, ymin, ymax = viewport
    return [
        ConstraintRow(a=[1.0, 0.0], b=xmin),
        ConstraintRow(a=[-1.0, 0.0], b=-xmax),
        ConstraintRow(a=[0.0, 1.0], b=ymin),
        ConstraintRow(a=[0.0, -1.0], b=-ymax),
    ]


def _extreme_status(polyhedron: Polyhedron, direction: Optional[np.ndarray]) -> SolveStatus:
    builder = ModelBuilder("region-extreme")
    x = builder.add_vars("x", polyhedron.n)
    for i, row in enumerate(polyhedron.rows):
        builder.add_constraint(dot(row.a, x), Relation.ge, row.b, name=f"row[{i}]")
    if direction is not None:
        builder.set_objective(dot(direction, x))
    return solve_lp(builder.build()).status


def is_bounded(polyhedron: Polyhedron) -> bool:
    """True when the (nonempty) region has a finite extent in every axis direction."""
    for direction in np.vstack([np.eye(polyhedron.n), -np.eye(polyhedron.n)]):
        if _extreme_status(polyhedron, direction) == SolveStatus.unbounded:
            return False
    return True


def is_empty(polyhedron: Polyhedron) -> bool:
    return _extreme_status(polyhedron, None) == SolveStatus.infeasible


def region_vertices_2d(
    polyhedron: Polyhedron, viewport: Optional[Viewport] = None
) -> list[tuple[float, float]]:
    """Vertices of a planar region in counter-clockwise order.

    The region is intersected with ``viewport`` when one is given. Vertices
    are intersections of row pairs that satisfy every row, deduplicated and
    sorted by angle around their centroid.

    Raises:
        EmptyRegionError: no point satisfies every row
        UnboundedRegionError: the region is unbounded and no viewport was given
    """
    if polyhedron.n != 2:
        raise DimensionMismatchError("vertex extraction requires n = 2", n=polyhedron.n)

    if viewport is not None:
        polyhedron = polyhedron.extended(viewport_rows(viewport))
    if is_empty(polyhedron):
        raise EmptyRegionError("no point satisfies every row", rows=len(polyhedron))
    if viewport is None and not is_bounded(polyhedron):
        raise UnboundedRegionError("region is unbounded; pass a viewport to clip it")

    A, b = polyhedron.A, polyhedron.b
    tol = get_settings().FEASIBILITY_TOL
    vertices: list[np.ndarray] = []
    for i, j in itertools.combinations(range(len(b)), 2):
        pair = A[[i, j]]
        if abs(np.linalg.det(pair)) < 1e-12:
            continue
        point = np.linalg.solve(pair, b[[i, j]])
        if np.all(A @ point - b >= -tol * np.maximum(1.0, np.abs(b))):
            if not any(np.max(np.abs(point - v)) <= _DEDUP_TOL for v in vertices):
                vertices.append(point)

    if not vertices:
        # nonempty and bounded with no crossing pair: every row is parallel
        raise UnboundedRegionError("region has no vertices")

    centroid = np.mean(vertices, axis=0)
    vertices.sort(key=lambda v: math.atan2(v[1] - centroid[1], v[0] - centroid[0]))
    return [(float(v[0]), float(v[1])) for v in vertices]
