"""Polyhedral value types: constraint rows, polyhedra and observation sets."""

from enum import Enum
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

NORMALIZATION_TOL = 1e-9


class NormalizationScheme(str, Enum):
    """How imputed rows are scaled to exclude trivial and rescaled solutions."""

    sum_proxy = "sum-proxy"
    l1_exact = "l1-exact"
    none = "none"


class ConstraintRow(BaseModel):
    """A single inequality ``a . x >= b``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: list[float] = Field(..., description="Coefficient vector")
    b: float = Field(..., description="Right-hand side")
    normalization: NormalizationScheme = Field(
        default=NormalizationScheme.none, description="Normalization the row satisfies"
    )
    sign: Optional[Literal[-1, 1]] = Field(
        default=None, description="Coefficient-sum sign for sum-proxy rows"
    )

    @model_validator(mode="after")
    def _check_normalization(self) -> "ConstraintRow":
        if self.normalization == NormalizationScheme.none:
            return self
        if not any(v != 0.0 for v in self.a):
            raise ValueError("a normalized row cannot have an all-zero coefficient vector")
        if self.normalization == NormalizationScheme.sum_proxy:
            total = sum(self.a)
            if abs(abs(total) - 1.0) > NORMALIZATION_TOL:
                raise ValueError(f"sum-proxy row has coefficient sum {total!r}, expected +-1")
            if self.sign is not None and abs(total - self.sign) > NORMALIZATION_TOL:
                raise ValueError(f"sum-proxy row sign {self.sign} disagrees with sum {total!r}")
        elif abs(sum(abs(v) for v in self.a) - 1.0) > NORMALIZATION_TOL:
            raise ValueError("l1-exact row must have unit L1 norm")
        return self

    @property
    def n(self) -> int:
        return len(self.a)

    def slack(self, x) -> float:
        return float(np.dot(self.a, x) - self.b)


class Polyhedron(BaseModel):
    """An H-representation ``{x : a_i . x >= b_i for every row}``.

    Also accepts the compact ``{"A": [[...]], "b": [...]}`` form on input.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=1, description="Ambient dimension")
    rows: list[ConstraintRow] = Field(default_factory=list, description="Inequality rows")

    @model_validator(mode="before")
    @classmethod
    def _accept_matrix_form(cls, data):
        if isinstance(data, dict) and ("A" in data or "G" in data):
            data = dict(data)
            A = data.pop("A", None)
            if A is None:
                A = data.pop("G")
            b = data.pop("b", None)
            if b is None:
                b = data.pop("h", [])
            if len(A) != len(b):
                raise ValueError(f"matrix has {len(A)} rows but right-hand side has {len(b)}")
            data["rows"] = [{"a": list(a), "b": bi} for a, bi in zip(A, b)]
            if "n" not in data and A:
                data["n"] = len(A[0])
        return data

    @model_validator(mode="after")
    def _check_dimensions(self) -> "Polyhedron":
        for i, row in enumerate(self.rows):
            if row.n != self.n:
                raise ValueError(f"row {i} has dimension {row.n}, expected {self.n}")
        return self

    @classmethod
    def from_matrix(cls, A, b, n: Optional[int] = None) -> "Polyhedron":
        A = np.asarray(A, dtype=float)
        if n is None:
            n = A.shape[1]
        rows = [ConstraintRow(a=list(map(float, a)), b=float(bi)) for a, bi in zip(A, b)]
        return cls(n=n, rows=rows)

    @property
    def A(self) -> np.ndarray:
        return np.array([row.a for row in self.rows], dtype=float).reshape(len(self.rows), self.n)

    @property
    def b(self) -> np.ndarray:
        return np.array([row.b for row in self.rows], dtype=float)

    def __len__(self) -> int:
        return len(self.rows)

    def extended(self, rows) -> "Polyhedron":
        return Polyhedron(n=self.n, rows=[*self.rows, *rows])


class ObservationSet(BaseModel):
    """Observed feasible solutions and the index of the preferred one."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    points: list[list[float]] = Field(..., min_length=1, description="Observations x^k")
    preferred_index: int = Field(default=0, ge=0, description="Index of x^0")

    @model_validator(mode="after")
    def _check_points(self) -> "ObservationSet":
        n = len(self.points[0])
        if n == 0:
            raise ValueError("observations must have at least one coordinate")
        for k, point in enumerate(self.points):
            if len(point) != n:
                raise ValueError(f"observation {k} has dimension {len(point)}, expected {n}")
        if self.preferred_index >= len(self.points):
            raise ValueError(
                f"preferred_index {self.preferred_index} out of range for {len(self.points)} points"
            )
        return self

    @property
    def n(self) -> int:
        return len(self.points[0])

    @property
    def K(self) -> int:
        return len(self.points)

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    @property
    def x0(self) -> np.ndarray:
        return np.asarray(self.points[self.preferred_index], dtype=float)
