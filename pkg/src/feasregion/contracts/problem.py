"""Inverse-problem contracts: problem instances and loss specifications."""

from collections.abc import Sequence
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from feasregion.contracts.errors import (
    AssumptionViolationError,
    DimensionMismatchError,
    ZeroCostVectorError,
)
from feasregion.contracts.geometry import NormalizationScheme, ObservationSet, Polyhedron
from feasregion.contracts.solver import Relation


class SideConstraint(BaseModel):
    """Linear restriction ``a_coefficients . a_i + b_coefficient * b_i  relation  rhs``.

    ``row=None`` applies the restriction to every imputed row.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    row: Optional[int] = Field(default=None, ge=0, description="Imputed row index, or all rows")
    a_coefficients: list[float] = Field(..., description="Weights on the row's coefficients")
    b_coefficient: float = Field(default=0.0, description="Weight on the row's right-hand side")
    relation: Relation = Field(default=Relation.eq, description="Sense of the restriction")
    rhs: float = Field(default=0.0, description="Right-hand side of the restriction")

    @classmethod
    def fix_rhs(cls, row: Optional[int], n: int, value: float) -> "SideConstraint":
        """Fix ``b_i = value``."""
        return cls(row=row, a_coefficients=[0.0] * n, b_coefficient=1.0, rhs=value)

    def applies_to(self, row: int) -> bool:
        return self.row is None or self.row == row


# ---------------------------------------------------------------------------
# Loss specifications
# ---------------------------------------------------------------------------


class AdherenceLoss(BaseModel):
    """Stay close to a prior guess of the unknown rows."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["adherence"] = "adherence"
    prior: Polyhedron = Field(..., description="Prior rows, one per unknown row")
    weights: Optional[list[float]] = Field(default=None, description="Per-row weights (default 1)")
    distance: Literal["l1", "l2"] = Field(default="l2", description="Row distance")

    @model_validator(mode="after")
    def _check_weights(self) -> "AdherenceLoss":
        if self.weights is not None:
            if len(self.weights) != len(self.prior.rows):
                raise ValueError("adherence weights must match the number of prior rows")
            if any(w < 0.0 for w in self.weights):
                raise ValueError("adherence weights must be nonnegative")
        return self

    def weight(self, i: int) -> float:
        return 1.0 if self.weights is None else float(self.weights[i])


class IndifferenceLoss(BaseModel):
    """Any imputed feasible set; closed form."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["indifference"] = "indifference"


class AdjacencyLoss(BaseModel):
    """Rows as close as possible to all observations in total."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["adjacency"] = "adjacency"


class FairnessLoss(BaseModel):
    """Every observation at the same total distance from the rows."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["fairness"] = "fairness"


class CompactnessLoss(BaseModel):
    """Every observation close to at least one row."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["compactness"] = "compactness"
    big_m: Optional[float] = Field(default=None, gt=0.0, description="Big-M (default from data)")


SingleLoss = Annotated[
    Union[AdherenceLoss, IndifferenceLoss, AdjacencyLoss, FairnessLoss, CompactnessLoss],
    Field(discriminator="kind"),
]


class CombinedLoss(BaseModel):
    """Sequential losses; each stage pins the previous optimum."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["combined"] = "combined"
    losses: list[SingleLoss] = Field(..., min_length=1, description="Stages in priority order")
    epsilon: float = Field(default=1e-7, ge=0.0, description="Relaxation of stage pins")

    @model_validator(mode="after")
    def _check_stages(self) -> "CombinedLoss":
        for loss in self.losses:
            if isinstance(loss, AdherenceLoss) and loss.distance == "l2":
                raise ValueError("L2 adherence cannot be a stage of a combined loss; use l1")
        return self


LossSpec = Annotated[
    Union[
        AdherenceLoss, IndifferenceLoss, AdjacencyLoss, FairnessLoss, CompactnessLoss, CombinedLoss
    ],
    Field(discriminator="kind"),
]


# ---------------------------------------------------------------------------
# Problem instance
# ---------------------------------------------------------------------------


class ProblemInstance(BaseModel):
    """Everything the inverse model needs except the loss."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    c: list[float] = Field(..., description="Cost vector of the forward problem")
    observations: ObservationSet = Field(..., description="Observed feasible solutions")
    known: Polyhedron = Field(..., description="Known constraints G x >= h (possibly empty)")
    m1: int = Field(..., ge=1, description="Number of unknown rows to impute")
    normalization: NormalizationScheme = Field(
        default=NormalizationScheme.sum_proxy, description="Normalization of imputed rows"
    )
    side_constraints: list[SideConstraint] = Field(
        default_factory=list, description="Restrictions on individual imputed rows"
    )
    label: str = Field(default="", description="Name used in logs and reports")

    @model_validator(mode="after")
    def _check_structure(self) -> "ProblemInstance":
        n = len(self.c)
        if self.observations.n != n:
            raise ValueError(f"observations have dimension {self.observations.n}, c has {n}")
        if self.known.n != n:
            raise ValueError(f"known set has dimension {self.known.n}, c has {n}")
        if self.normalization == NormalizationScheme.none:
            raise ValueError("imputed rows need a normalization scheme")
        for side in self.side_constraints:
            if len(side.a_coefficients) != n:
                raise ValueError("side constraint coefficients must have length n")
            if side.row is not None and side.row >= self.m1:
                raise ValueError(f"side constraint refers to row {side.row} but m1 = {self.m1}")
        return self

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def cost(self) -> np.ndarray:
        return np.asarray(self.c, dtype=float)

    @property
    def x0(self) -> np.ndarray:
        return self.observations.x0

    def side_constraints_for(self, row: int) -> list[SideConstraint]:
        return [s for s in self.side_constraints if s.applies_to(row)]

    @property
    def rows_share_constraints(self) -> bool:
        """True when every imputed row faces the same restrictions."""
        return all(s.row is None for s in self.side_constraints)

    def check_assumptions(self) -> None:
        """Validate the nonzero cost vector, known-set validity and the preferred index.

        Raises:
            ZeroCostVectorError: c is the zero vector
            AssumptionViolationError: an observation violates a known row, or
                the preferred index does not minimise c'x
        """
        c = self.cost
        if not np.any(c != 0.0):
            raise ZeroCostVectorError("cost vector must be nonzero")

        X = self.observations.matrix
        if len(self.known):
            slack = X @ self.known.A.T - self.known.b
            bad = np.argwhere(slack < -1e-7)
            if bad.size:
                violations = [
                    {"observation": int(k), "row": int(i), "amount": float(-slack[k, i])}
                    for k, i in bad[:10]
                ]
                raise AssumptionViolationError(
                    f"{len(bad)} observation/row pairs violate the known constraints",
                    violations=violations,
                )

        values = X @ c
        x0_value = values[self.observations.preferred_index]
        if x0_value > values.min() + 1e-9 * max(1.0, abs(values.min())):
            raise AssumptionViolationError(
                "preferred observation does not minimise c'x",
                preferred_index=self.observations.preferred_index,
                best_index=int(np.argmin(values)),
            )

    @classmethod
    def build(
        cls,
        c: Sequence[float],
        points: Sequence[Sequence[float]],
        m1: int,
        known: Optional[Polyhedron] = None,
        normalization: NormalizationScheme = NormalizationScheme.sum_proxy,
        side_constraints: Sequence[SideConstraint] = (),
        label: str = "",
    ) -> "ProblemInstance":
        """Construct an instance, select x^0 and check the modelling assumptions."""
        from feasregion.geometry import preferred_observation

        n = len(c)
        if any(len(p) != n for p in points):
            raise DimensionMismatchError("observation dimension differs from len(c)", n=n)
        index = preferred_observation(points, c)
        instance = cls(
            c=list(map(float, c)),
            observations=ObservationSet(points=[list(map(float, p)) for p in points],
                                        preferred_index=index),
            known=known if known is not None else Polyhedron(n=n),
            m1=m1,
            normalization=normalization,
            side_constraints=list(side_constraints),
            label=label,
        )
        instance.check_assumptions()
        return instance

    def with_robust_preferred(self, radius: float) -> "ProblemInstance":
        """Replace x^0 by its worst case over the box of the given radius."""
        from feasregion.forward import robust_preferred_box

        if radius == 0.0:
            return self
        points = [list(p) for p in self.observations.points]
        k = self.observations.preferred_index
        points[k] = robust_preferred_box(self.x0, radius, self.cost).tolist()
        instance = self.model_copy(
            update={"observations": ObservationSet(points=points, preferred_index=k)}
        )
        instance.check_assumptions()
        return instance


class ForwardProblem(BaseModel):
    """``min c'x`` over a polyhedron."""

    model_config = ConfigDict(frozen=True)

    c: list[float] = Field(..., description="Cost vector")
    region: Polyhedron = Field(..., description="Feasible region")

    @model_validator(mode="after")
    def _check(self) -> "ForwardProblem":
        if len(self.c) != self.region.n:
            raise ValueError(f"c has length {len(self.c)} but region dimension is {self.region.n}")
        if not any(v != 0.0 for v in self.c):
            raise ValueError("cost vector must be nonzero")
        return self
