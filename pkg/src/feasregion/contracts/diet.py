"""Diet case-study dataset types."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from feasregion.contracts.geometry import ConstraintRow, Polyhedron


class ObjectiveKind(str, Enum):
    """Forward objective of the diet problem, always posed as a minimisation."""

    max_protein = "max-protein"
    min_sodium = "min-sodium"


class NutrientBound(BaseModel):
    """Daily limits for one nutrient."""

    model_config = ConfigDict(extra="forbid")

    lower: Optional[float] = Field(default=None, description="Minimum daily intake")
    upper: Optional[float] = Field(default=None, description="Maximum daily intake")

    @model_validator(mode="after")
    def _check(self) -> "NutrientBound":
        if self.lower is None and self.upper is None:
            raise ValueError("a nutrient bound needs a lower or an upper limit")
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        return self


class DietDataset(BaseModel):
    """Daily servings per food plus the nutrient content of each food."""

    model_config = ConfigDict(extra="forbid")

    foods: list[str] = Field(..., min_length=1, description="Food names, one per column")
    nutrients: list[str] = Field(..., min_length=1, description="Nutrient names")
    observations: list[list[float]] = Field(..., min_length=1, description="Servings per day")
    nutrient_matrix: list[list[float]] = Field(..., description="Nutrient per serving, by food")
    bounds: dict[str, NutrientBound] = Field(default_factory=dict, description="Nutrient limits")
    max_total_servings: Optional[float] = Field(default=None, description="Servings per day cap")
    objective_kind: ObjectiveKind = Field(default=ObjectiveKind.min_sodium)
    dataset_hash: Optional[str] = Field(default=None, description="SHA-256 of the source files")

    @model_validator(mode="after")
    def _check_shapes(self) -> "DietDataset":
        n, p = len(self.foods), len(self.nutrients)
        if any(len(day) != n for day in self.observations):
            raise ValueError(f"every observation must list {n} foods")
        if len(self.nutrient_matrix) != n or any(len(r) != p for r in self.nutrient_matrix):
            raise ValueError(f"nutrient matrix must be {n} x {p}")
        unknown = sorted(set(self.bounds) - set(self.nutrients))
        if unknown:
            raise ValueError(f"bounds name unknown nutrients: {unknown}")
        return self

    @property
    def n(self) -> int:
        return len(self.foods)

    @property
    def K(self) -> int:
        return len(self.observations)

    @property
    def X(self) -> np.ndarray:
        return np.asarray(self.observations, dtype=float)

    @property
    def N(self) -> np.ndarray:
        return np.asarray(self.nutrient_matrix, dtype=float).reshape(self.n, len(self.nutrients))

    def nutrient_column(self, name: str) -> np.ndarray:
        return self.N[:, self.nutrients.index(name)]

    def cost_vector(self, kind: Optional[ObjectiveKind] = None) -> np.ndarray:
        kind = ObjectiveKind(kind or self.objective_kind)
        if kind == ObjectiveKind.max_protein:
            return -self.nutrient_column("protein")
        return self.nutrient_column("sodium")

    def known_polyhedron(self) -> Polyhedron:
        """Nutrient limits, the total-servings cap and nonnegative servings."""
        rows = []
        for name in self.nutrients:
            bound = self.bounds.get(name)
            if bound is None:
                continue
            column = self.nutrient_column(name)
            if bound.lower is not None:
                rows.append(ConstraintRow(a=column.tolist(), b=bound.lower))
            if bound.upper is not None:
                rows.append(ConstraintRow(a=(-column).tolist(), b=-bound.upper))
        if self.max_total_servings is not None:
            rows.append(ConstraintRow(a=[-1.0] * self.n, b=-self.max_total_servings))
        for j in range(self.n):
            unit = [0.0] * self.n
            unit[j] = 1.0
            rows.append(ConstraintRow(a=unit, b=0.0))
        return Polyhedron(n=self.n, rows=rows)
