"""The known set S and region assembly."""

from collections.abc import Sequence

from feasregion.contracts.geometry import ConstraintRow, NormalizationScheme, Polyhedron
from feasregion.geometry import half_space_of_cost


def build_known_set(
    c: Sequence[float],
    x0: Sequence[float],
    known: Polyhedron,
    scheme: NormalizationScheme = NormalizationScheme.sum_proxy,
) -> Polyhedron:
    """``S``: the cost half-space through x^0 followed by the known rows."""
    cost_row = half_space_of_cost(c, x0, scheme)
    return Polyhedron(n=known.n, rows=[cost_row, *known.rows])


def assemble_region(rows: Sequence[ConstraintRow], known_set: Polyhedron) -> Polyhedron:
    """``S`` followed by the imputed rows."""
    return known_set.extended(rows)
