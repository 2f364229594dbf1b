"""Result contracts: verification reports, imputed regions, case-study reports."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from feasregion.contracts.geometry import ConstraintRow, Polyhedron
from feasregion.contracts.messages import Message


class Violation(BaseModel):
    """An observation violating a row."""

    row: int = Field(..., description="Row index within the checked polyhedron")
    observation: int = Field(..., description="Observation index")
    amount: float = Field(..., description="How far b exceeds a . x")


class VerificationReport(BaseModel):
    """Checkable facts about an imputed region."""

    primal_feasible: bool = Field(..., description="Every observation satisfies every row")
    worst_violation: float = Field(default=0.0, description="Largest row violation")
    x0_optimal: bool = Field(..., description="Forward optimum equals c'x0")
    normalization_ok: bool = Field(..., description="Every row satisfies its normalization tag")
    forward_optimum: Optional[float] = Field(default=None, description="Forward optimal value")
    co_optimal_observations: list[int] = Field(
        default_factory=list, description="Observations with c'x^k equal to c'x0"
    )
    violations: list[Violation] = Field(default_factory=list, description="Failed checks")
    issues: list[Message] = Field(default_factory=list, description="Readable failure notes")

    @model_validator(mode="after")
    def _optimal_implies_feasible(self) -> "VerificationReport":
        if self.x0_optimal and not self.primal_feasible:
            raise ValueError("x0_optimal requires primal_feasible")
        return self

    @property
    def all_ok(self) -> bool:
        return self.primal_feasible and self.x0_optimal and self.normalization_ok


class RowDiagnostics(BaseModel):
    """How one imputed row (or one joint solve) was obtained."""

    row: Optional[int] = Field(default=None, description="Row index, None for joint solves")
    label: str = Field(..., description="Subproblem name")
    sign: Optional[int] = Field(default=None, description="Chosen coefficient-sum sign")
    objective: Optional[float] = Field(default=None, description="Subproblem objective")
    status: str = Field(default="optimal", description="Solver status")
    iterations: int = Field(default=0, description="Pivots or active sets examined")
    node_count: int = Field(default=0, description="Branch-and-bound nodes")
    replicated: bool = Field(default=False, description="Copied from an identical subproblem")
    shortcut: bool = Field(default=False, description="Taken from the prior without solving")


class ImputedRegion(BaseModel):
    """Imputed rows, the known set they were assembled with, and diagnostics."""

    imputed_rows: list[ConstraintRow] = Field(..., description="Imputed rows A, b")
    known_set: Polyhedron = Field(..., description="Known set S with the cost half-space first")
    loss_kind: str = Field(..., description="Loss the rows optimise")
    loss_value: float = Field(..., description="Loss at the returned rows")
    stage_values: list[float] = Field(
        default_factory=list, description="Optimal value of each combined stage"
    )
    diagnostics: list[RowDiagnostics] = Field(default_factory=list, description="Solve details")
    verification: VerificationReport = Field(..., description="Checks on the assembled region")

    @property
    def n(self) -> int:
        return self.known_set.n

    @property
    def A(self) -> np.ndarray:
        return np.array([r.a for r in self.imputed_rows], dtype=float).reshape(-1, self.n)

    @property
    def b(self) -> np.ndarray:
        return np.array([r.b for r in self.imputed_rows], dtype=float)

    def region(self) -> Polyhedron:
        """``S`` followed by the imputed rows."""
        return self.known_set.extended(self.imputed_rows)


class FoodComparison(BaseModel):
    """One line of the per-food diet comparison."""

    food: str
    observed_mean: float
    without_mio: float
    with_mio: float


class CaseStudyReport(BaseModel):
    """Diet recommendations with and without imputed constraints."""

    objective_kind: str = Field(..., description="max-protein or min-sodium")
    m1: int = Field(..., description="Number of imputed rows")
    loss_kind: str = Field(..., description="Loss used for imputation")
    loss_value: float = Field(..., description="Loss at the imputed rows")
    foods: list[str] = Field(..., description="Food names in column order")
    preferred_index: int = Field(..., description="Day used as x0")
    diet_without_mio: list[float] = Field(..., description="Servings using known rows only")
    diet_with_mio: list[float] = Field(..., description="Servings using known and imputed rows")
    avg_l1_without: float = Field(..., description="Mean L1 distance to observations")
    avg_l1_with: float = Field(..., description="Mean L1 distance to observations")
    comparison: list[FoodComparison] = Field(default_factory=list, description="Per-food table")
    verification: VerificationReport = Field(..., description="Checks on the imputed region")
    dataset_hash: Optional[str] = Field(default=None, description="SHA-256 of input files")
