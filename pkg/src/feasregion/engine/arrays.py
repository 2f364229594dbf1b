"""Dense numpy view of a :class:`SolverModel`."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from feasregion.contracts.errors import DimensionMismatchError
from feasregion.contracts.solver import Relation, SolverModel

GE, LE, EQ = 0, 1, 2

_SENSE_CODES = {Relation.ge: GE, Relation.le: LE, Relation.eq: EQ}


@dataclass(frozen=True)
class ModelArrays:
    """Arrays shared by the LP, MILP and QP kernels."""

    c: np.ndarray
    c0: float
    A: np.ndarray
    sense: np.ndarray
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    q: Optional[np.ndarray]
    binary: np.ndarray

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    def objective(self, x: np.ndarray) -> float:
        value = float(self.c @ x) + self.c0
        if self.q is not None:
            value += float(self.q @ (x * x))
        return value

    def max_violation(self, x: np.ndarray) -> float:
        """Largest violation of any row or bound at ``x`` (0 when feasible)."""
        worst = 0.0
        if self.num_rows:
            lhs = self.A @ x
            gap = np.where(
                self.sense == GE,
                self.rhs - lhs,
                np.where(self.sense == LE, lhs - self.rhs, np.abs(lhs - self.rhs)),
            )
            worst = max(worst, float(gap.max()))
        worst = max(worst, float(np.max(self.lower - x, initial=0.0)))
        worst = max(worst, float(np.max(x - self.upper, initial=0.0)))
        return worst


def model_arrays(model: SolverModel) -> ModelArrays:
    """Convert a validated model into dense arrays."""
    n = model.num_vars
    try:
        A = np.array([row.coefficients for row in model.rows], dtype=float).reshape(
            len(model.rows), n
        )
    except ValueError as exc:
        raise DimensionMismatchError(
            "row coefficient vectors do not match num_vars", num_vars=n
        ) from exc
    c = np.asarray(model.objective, dtype=float)
    if c.shape != (n,):
        raise DimensionMismatchError("objective length does not match num_vars", num_vars=n)
    bounds = np.asarray(model.var_bounds, dtype=float).reshape(n, 2)
    q = None
    if model.quadratic_diag is not None:
        q = np.asarray(model.quadratic_diag, dtype=float)
    return ModelArrays(
        c=c,
        c0=float(model.objective_constant),
        A=A,
        sense=np.array([_SENSE_CODES[row.relation] for row in model.rows], dtype=int),
        rhs=np.array([row.rhs for row in model.rows], dtype=float),
        lower=bounds[:, 0].copy(),
        upper=bounds[:, 1].copy(),
        q=q,
        binary=np.asarray(model.integrality, dtype=bool),
    )
