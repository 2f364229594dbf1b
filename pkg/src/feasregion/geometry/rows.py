"""Constraint-row operations: normalization, slack and validity checks."""

from collections.abc import Sequence

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.errors import (
    DimensionMismatchError,
    NormalizationDegenerateError,
    ZeroCostVectorError,
)
from feasregion.contracts.geometry import (
    ConstraintRow,
    NormalizationScheme,
    ObservationSet,
    Polyhedron,
)
from feasregion.contracts.reports import Violation


def _as_vector(values, name: str) -> np.ndarray:
    vector = np.asarray(values, dtype=float)
    if vector.ndim != 1:
        raise DimensionMismatchError(f"{name} must be a vector", shape=list(vector.shape))
    return vector


def preferred_observation(points: Sequence[Sequence[float]], c: Sequence[float]) -> int:
    """Index of the observation minimising ``c'x``; lowest index on ties."""
    c = _as_vector(c, "c")
    if not np.any(c != 0.0):
        raise ZeroCostVectorError("cost vector must be nonzero")
    if len(points) == 0:
        raise ValueError("at least one observation is required")
    X = np.asarray(points, dtype=float)
    if X.ndim != 2 or X.shape[1] != c.shape[0]:
        raise DimensionMismatchError(
            "observations do not match the cost vector", n=int(c.shape[0])
        )
    values = X @ c
    best = values.min()
    tied = np.flatnonzero(values <= best + 1e-12 * max(1.0, abs(best)))
    return int(tied[0])


def normalize_row(
    row: ConstraintRow, scheme: NormalizationScheme = NormalizationScheme.sum_proxy
) -> ConstraintRow:
    """Rescale a row by a positive factor so the scheme's norm equals one.

    Raises:
        NormalizationDegenerateError: the row cannot be scaled under ``scheme``
    """
    a = np.asarray(row.a, dtype=float)
    if scheme == NormalizationScheme.none:
        return ConstraintRow(a=a.tolist(), b=row.b)

    if scheme == NormalizationScheme.sum_proxy:
        scale = abs(float(a.sum()))
        if scale <= 1e-12 * max(1.0, float(np.abs(a).sum())):
            raise NormalizationDegenerateError(
                "coefficients sum to zero; use l1-exact normalization for this row",
                a=a.tolist(),
            )
    else:
        scale = float(np.abs(a).sum())
        if scale == 0.0:
            raise NormalizationDegenerateError("all-zero row cannot be normalized", a=a.tolist())

    a = a / scale
    sign = None
    if scheme == NormalizationScheme.sum_proxy:
        sign = 1 if a.sum() > 0 else -1
        # absorb rounding so the sum is exactly representable as +-1
        a[np.argmax(np.abs(a))] += sign - a.sum()
    return ConstraintRow(a=a.tolist(), b=row.b / scale, normalization=scheme, sign=sign)


def half_space_of_cost(
    c: Sequence[float],
    x0: Sequence[float],
    scheme: NormalizationScheme = NormalizationScheme.sum_proxy,
) -> ConstraintRow:
    """The row ``c'x >= c'x0`` normalized under ``scheme``."""
    c = _as_vector(c, "c")
    x0 = _as_vector(x0, "x0")
    if not np.any(c != 0.0):
        raise ZeroCostVectorError("cost vector must be nonzero")
    if c.shape != x0.shape:
        raise DimensionMismatchError("c and x0 differ in length", n=int(c.shape[0]))
    return normalize_row(ConstraintRow(a=c.tolist(), b=float(c @ x0)), scheme)


def slack_distance(row: ConstraintRow, x: Sequence[float]) -> float:
    """``a'x - b``; negative when ``x`` violates the row."""
    x = _as_vector(x, "x")
    if x.shape[0] != row.n:
        raise DimensionMismatchError("point and row differ in dimension", n=row.n)
    return float(np.dot(row.a, x) - row.b)


def is_valid_set(polyhedron: Polyhedron, obs: ObservationSet) -> tuple[bool, list[Violation]]:
    """Check that every observation satisfies every row.

    Returns:
        ``(valid, violations)`` with one entry per failing (row, observation)
    """
    if obs.n != polyhedron.n:
        raise DimensionMismatchError(
            "observations and polyhedron differ in dimension", n=polyhedron.n
        )
    if not len(polyhedron):
        return True, []
    tol = get_settings().FEASIBILITY_TOL
    slack = obs.matrix @ polyhedron.A.T - polyhedron.b
    violations = [
        Violation(row=int(i), observation=int(k), amount=float(-slack[k, i]))
        for k, i in np.argwhere(slack < -tol)
    ]
    violations.sort(key=lambda v: (v.row, v.observation))
    return not violations, violations


def row_is_normalized(row: ConstraintRow, scheme: NormalizationScheme) -> bool:
    """Whether the row's coefficients already satisfy ``scheme`` within tolerance."""
    a = np.asarray(row.a, dtype=float)
    tol = get_settings().NORMALIZATION_TOL
    if scheme == NormalizationScheme.sum_proxy:
        return abs(abs(a.sum()) - 1.0) <= tol
    if scheme == NormalizationScheme.l1_exact:
        return abs(np.abs(a).sum() - 1.0) <= tol
    return True
