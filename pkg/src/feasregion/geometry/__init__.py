"""Polyhedral geometry: rows, normalization, validity and planar vertices."""

from feasregion.geometry.polygon import (
    is_bounded,
    is_empty,
    region_vertices_2d,
    viewport_rows,
)
from feasregion.geometry.rows import (
    half_space_of_cost,
    is_valid_set,
    normalize_row,
    preferred_observation,
    row_is_normalized,
    slack_distance,
)

__all__ = [
    "half_space_of_cost",
    "is_bounded",
    "is_empty",
    "is_valid_set",
    "normalize_row",
    "preferred_observation",
    "region_vertices_2d",
    "row_is_normalized",
    "slack_distance",
    "viewport_rows",
]
