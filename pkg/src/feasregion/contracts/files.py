"""On-disk JSON formats for problems and imputed regions.

Both schemas reject unknown keys so a typo in an experiment file fails
loudly instead of silently falling back to a default.
"""

from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from feasregion.contracts.geometry import ConstraintRow, NormalizationScheme, Polyhedron
from feasregion.contracts.problem import (
    IndifferenceLoss,
    LossSpec,
    ProblemInstance,
    SideConstraint,
)
from feasregion.contracts.reports import ImputedRegion, RowDiagnostics, VerificationReport


class KnownBlock(BaseModel):
    """Known constraints ``G x >= h``."""

    model_config = ConfigDict(extra="forbid")

    G: list[list[float]] = Field(default_factory=list, description="Known row coefficients")
    h: list[float] = Field(default_factory=list, description="Known right-hand sides")

    @model_validator(mode="after")
    def _check_shape(self) -> "KnownBlock":
        if len(self.G) != len(self.h):
            raise ValueError(f"known block has {len(self.G)} rows in G but {len(self.h)} in h")
        return self


class ProblemFile(BaseModel):
    """Serialized inverse problem."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=1, description="Dimension")
    c: list[float] = Field(..., description="Cost vector")
    observations: list[list[float]] = Field(..., min_length=1, description="Observations")
    known: KnownBlock = Field(default_factory=KnownBlock, description="Known constraints")
    m1: int = Field(..., ge=1, description="Number of unknown rows")
    normalization: Literal["sum-proxy", "l1-exact"] = Field(
        default="sum-proxy", description="Normalization of imputed rows"
    )
    loss: LossSpec = Field(default_factory=IndifferenceLoss, description="Loss specification")
    seed: Optional[int] = Field(default=None, description="Seed recorded with the experiment")
    robust_radius: float = Field(default=0.0, ge=0.0, description="Box radius around x0")
    side_constraints: list[SideConstraint] = Field(
        default_factory=list, description="Restrictions on imputed rows"
    )
    label: str = Field(default="", description="Problem name")

    @model_validator(mode="after")
    def _check_dimensions(self) -> "ProblemFile":
        if len(self.c) != self.n:
            raise ValueError(f"c has length {len(self.c)}, expected n = {self.n}")
        for k, point in enumerate(self.observations):
            if len(point) != self.n:
                raise ValueError(f"observation {k} has length {len(point)}, expected {self.n}")
        for i, row in enumerate(self.known.G):
            if len(row) != self.n:
                raise ValueError(f"known row {i} has length {len(row)}, expected {self.n}")
        return self

    def known_polyhedron(self) -> Polyhedron:
        return Polyhedron(
            n=self.n,
            rows=[ConstraintRow(a=g, b=h) for g, h in zip(self.known.G, self.known.h)],
        )

    def to_instance(self) -> ProblemInstance:
        """Build and validate the instance, applying the robust radius."""
        instance = ProblemInstance.build(
            c=self.c,
            points=self.observations,
            m1=self.m1,
            known=self.known_polyhedron(),
            normalization=NormalizationScheme(self.normalization),
            side_constraints=self.side_constraints,
            label=self.label,
        )
        return instance.with_robust_preferred(self.robust_radius)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ProblemFile":
        return cls.model_validate_json(Path(path).read_text())


class RegionFile(BaseModel):
    """Serialized :class:`ImputedRegion`."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(..., ge=1, description="Dimension")
    A: list[list[float]] = Field(..., description="Imputed row coefficients")
    b: list[float] = Field(..., description="Imputed right-hand sides")
    normalization: list[NormalizationScheme] = Field(..., description="Per-row normalization")
    signs: list[Optional[int]] = Field(..., description="Per-row coefficient-sum sign")
    S: Polyhedron = Field(..., description="Known set with the cost half-space first")
    loss_kind: str = Field(..., description="Loss name")
    loss_value: float = Field(..., description="Loss value")
    stage_values: list[float] = Field(default_factory=list, description="Combined stage values")
    diagnostics: list[RowDiagnostics] = Field(default_factory=list, description="Solve details")
    verification: VerificationReport = Field(..., description="Verification report")

    @model_validator(mode="after")
    def _check_lengths(self) -> "RegionFile":
        m = len(self.A)
        if not (len(self.b) == len(self.normalization) == len(self.signs) == m):
            raise ValueError("A, b, normalization and signs must have one entry per row")
        for i, row in enumerate(self.A):
            if len(row) != self.n:
                raise ValueError(f"row {i} of A has length {len(row)}, expected {self.n}")
        if self.S.n != self.n:
            raise ValueError(f"S has dimension {self.S.n}, expected {self.n}")
        return self

    @classmethod
    def from_region(cls, region: ImputedRegion) -> "RegionFile":
        rows = region.imputed_rows
        return cls(
            n=region.n,
            A=[list(r.a) for r in rows],
            b=[r.b for r in rows],
            normalization=[r.normalization for r in rows],
            signs=[r.sign for r in rows],
            S=region.known_set,
            loss_kind=region.loss_kind,
            loss_value=region.loss_value,
            stage_values=list(region.stage_values),
            diagnostics=list(region.diagnostics),
            verification=region.verification,
        )

    def to_region(self) -> ImputedRegion:
        rows = [
            ConstraintRow(a=a, b=b, normalization=tag, sign=sign)
            for a, b, tag, sign in zip(self.A, self.b, self.normalization, self.signs)
        ]
        return ImputedRegion(
            imputed_rows=rows,
            known_set=self.S,
            loss_kind=self.loss_kind,
            loss_value=self.loss_value,
            stage_values=list(self.stage_values),
            diagnostics=list(self.diagnostics),
            verification=self.verification,
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RegionFile":
        return cls.model_validate_json(Path(path).read_text())

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.model_dump_json(indent=2))
