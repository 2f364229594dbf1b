"""Contracts for the generic LP/MILP/QP solver interface."""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Relation(str, Enum):
    """Sense of a linear row."""

    ge = ">="
    le = "<="
    eq = "="


class SolveStatus(str, Enum):
    """Outcome classification of a solve."""

    optimal = "optimal"
    infeasible = "infeasible"
    unbounded = "unbounded"
    iteration_limit = "iteration_limit"


class LinearRow(BaseModel):
    """A single linear row ``coefficients . x  relation  rhs``."""

    model_config = ConfigDict(frozen=True)

    coefficients: list[float] = Field(..., description="One coefficient per model variable")
    relation: Relation = Field(..., description="Row sense")
    rhs: float = Field(..., description="Right-hand side")
    name: str = Field(default="", description="Optional label used in diagnostics")


class SolverModel(BaseModel):
    """An LP, MILP or diagonal QP in minimization form.

    Objective: ``sum_j quadratic_diag[j] * x_j**2 + objective . x + objective_constant``.
    Variables listed in ``integrality`` are binary.
    """

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    num_vars: int = Field(..., ge=0, description="Number of decision variables")
    objective: list[float] = Field(..., description="Linear objective coefficients")
    objective_constant: float = Field(default=0.0, description="Constant objective offset")
    quadratic_diag: Optional[list[float]] = Field(
        default=None, description="Diagonal quadratic coefficients (QP mode only)"
    )
    rows: list[LinearRow] = Field(default_factory=list, description="Linear rows")
    var_bounds: list[tuple[float, float]] = Field(
        default_factory=list, description="Per-variable (lower, upper); infinities allowed"
    )
    integrality: list[bool] = Field(
        default_factory=list, description="Per-variable binary flag"
    )
    var_names: list[str] = Field(default_factory=list, description="Optional variable labels")

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data):
        if isinstance(data, dict):
            n = data.get("num_vars", 0)
            if not data.get("var_bounds"):
                data["var_bounds"] = [(-math.inf, math.inf)] * n
            if not data.get("integrality"):
                data["integrality"] = [False] * n
        return data

    @model_validator(mode="after")
    def _check_dimensions(self) -> "SolverModel":
        n = self.num_vars
        if len(self.objective) != n:
            raise ValueError(f"objective has length {len(self.objective)}, expected {n}")
        if len(self.var_bounds) != n:
            raise ValueError(f"var_bounds has length {len(self.var_bounds)}, expected {n}")
        if len(self.integrality) != n:
            raise ValueError(f"integrality has length {len(self.integrality)}, expected {n}")
        if self.var_names and len(self.var_names) != n:
            raise ValueError(f"var_names has length {len(self.var_names)}, expected {n}")
        for i, row in enumerate(self.rows):
            if len(row.coefficients) != n:
                raise ValueError(
                    f"row {i} ({row.name or 'unnamed'}) has {len(row.coefficients)} "
                    f"coefficients, expected {n}"
                )
        for j, (lo, hi) in enumerate(self.var_bounds):
            if lo > hi:
                raise ValueError(f"variable {j} has lower bound {lo} above upper bound {hi}")
            if self.integrality[j] and (lo < 0.0 or hi > 1.0):
                raise ValueError(f"binary variable {j} must have bounds within [0, 1]")
        if self.quadratic_diag is not None:
            if len(self.quadratic_diag) != n:
                raise ValueError(
                    f"quadratic_diag has length {len(self.quadratic_diag)}, expected {n}"
                )
            if any(q < 0.0 for q in self.quadratic_diag):
                raise ValueError("quadratic_diag must be entrywise nonnegative")
        return self

    @property
    def is_mixed_integer(self) -> bool:
        return any(self.integrality)

    @property
    def is_quadratic(self) -> bool:
        return self.quadratic_diag is not None and any(q != 0.0 for q in self.quadratic_diag)

    def debug_dump(self) -> str:
        """JSON dump of the model for triage."""
        return self.model_dump_json(indent=2)


class SolverResult(BaseModel):
    """Status and primal solution of a solve."""

    model_config = ConfigDict(frozen=True)

    status: SolveStatus = Field(..., description="Outcome classification")
    solution: Optional[list[float]] = Field(default=None, description="Primal point (optimal only)")
    objective_value: Optional[float] = Field(default=None, description="Objective at solution")
    duals: Optional[list[float]] = Field(
        default=None,
        description="Row duals of an optimal LP (>= rows nonnegative, <= rows nonpositive)",
    )
    node_count: int = Field(default=0, description="Branch-and-bound nodes solved (MILP only)")
    iterations: int = Field(default=0, description="Simplex pivots or active sets examined")
    message: str = Field(default="", description="Human-readable detail")

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.optimal
