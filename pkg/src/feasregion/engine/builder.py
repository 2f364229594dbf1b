"""Incremental construction of :class:`SolverModel` instances.

Models are assembled from named variables and sparse linear expressions,
then densified once in :meth:`ModelBuilder.build`.
"""

from __future__ import annotations

import copy
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from feasregion.contracts.solver import LinearRow, Relation, SolverModel

Number = Union[int, float]


@dataclass
class LinExpr:
    """Sparse affine expression ``sum terms[j] * x_j + constant``."""

    terms: dict[int, float] = field(default_factory=dict)
    constant: float = 0.0

    @classmethod
    def var(cls, index: int, coef: float = 1.0) -> LinExpr:
        return cls({index: float(coef)})

    @classmethod
    def const(cls, value: float) -> LinExpr:
        return cls({}, float(value))

    @classmethod
    def total(cls, exprs: Iterable[LinExpr]) -> LinExpr:
        out = cls()
        for expr in exprs:
            out.add_inplace(expr)
        return out

    def add_inplace(self, other: Union[LinExpr, Number], scale: float = 1.0) -> LinExpr:
        if isinstance(other, LinExpr):
            for j, v in other.terms.items():
                self.terms[j] = self.terms.get(j, 0.0) + scale * v
            self.constant += scale * other.constant
        else:
            self.constant += scale * float(other)
        return self

    def copy(self) -> LinExpr:
        return LinExpr(dict(self.terms), self.constant)

    def __add__(self, other: Union[LinExpr, Number]) -> LinExpr:
        return self.copy().add_inplace(other)

    __radd__ = __add__

    def __sub__(self, other: Union[LinExpr, Number]) -> LinExpr:
        return self.copy().add_inplace(other, -1.0)

    def __rsub__(self, other: Union[LinExpr, Number]) -> LinExpr:
        return (-self).add_inplace(other)

    def __mul__(self, scalar: Number) -> LinExpr:
        s = float(scalar)
        return LinExpr({j: s * v for j, v in self.terms.items()}, s * self.constant)

    __rmul__ = __mul__

    def __neg__(self) -> LinExpr:
        return self * -1.0

    def value(self, x: Sequence[float]) -> float:
        return self.constant + sum(v * x[j] for j, v in self.terms.items())


def dot(coefficients: Sequence[float], exprs: Sequence[LinExpr]) -> LinExpr:
    """``sum_j coefficients[j] * exprs[j]``."""
    out = LinExpr()
    for coef, expr in zip(coefficients, exprs):
        if coef != 0.0:
            out.add_inplace(expr, float(coef))
    return out


@dataclass
class _Row:
    terms: dict[int, float]
    relation: Relation
    rhs: float
    name: str


class ModelBuilder:
    """Collects variables, rows and an objective for one solve."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.names: list[str] = []
        self.lower: list[float] = []
        self.upper: list[float] = []
        self.binary: list[bool] = []
        self.rows: list[_Row] = []
        self.objective = LinExpr()
        self.quadratic: dict[int, float] = {}

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def add_var(
        self,
        name: str,
        lower: float = -math.inf,
        upper: float = math.inf,
        binary: bool = False,
    ) -> LinExpr:
        """Add a variable and return it as an expression."""
        if binary:
            lower, upper = max(lower, 0.0), min(upper, 1.0)
        self.names.append(name)
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.binary.append(binary)
        return LinExpr.var(len(self.names) - 1)

    def add_vars(self, prefix: str, count: int, **kwargs) -> list[LinExpr]:
        return [self.add_var(f"{prefix}[{i}]", **kwargs) for i in range(count)]

    def add_constraint(
        self, expr: LinExpr, relation: Relation, rhs: float = 0.0, name: str = ""
    ) -> None:
        """Add ``expr relation rhs``; the expression constant moves to the right."""
        terms = {j: v for j, v in expr.terms.items() if v != 0.0}
        self.rows.append(_Row(terms, relation, float(rhs) - expr.constant, name))

    def set_bounds(self, expr: LinExpr, lower: float, upper: float) -> None:
        (index,) = expr.terms
        self.lower[index] = float(lower)
        self.upper[index] = float(upper)

    def set_objective(self, expr: LinExpr, quadratic: Optional[dict[int, float]] = None) -> None:
        self.objective = expr.copy()
        self.quadratic = dict(quadratic or {})

    def copy(self) -> ModelBuilder:
        return copy.deepcopy(self)

    def build(self) -> SolverModel:
        n = self.num_vars
        objective = np.zeros(n)
        for j, v in self.objective.terms.items():
            objective[j] += v
        rows = []
        for row in self.rows:
            dense = np.zeros(n)
            for j, v in row.terms.items():
                dense[j] += v
            rows.append(
                LinearRow(
                    coefficients=dense.tolist(),
                    relation=row.relation,
                    rhs=row.rhs,
                    name=row.name,
                )
            )
        quadratic_diag = None
        if self.quadratic:
            q = np.zeros(n)
            for j, v in self.quadratic.items():
                q[j] += v
            quadratic_diag = q.tolist()
        return SolverModel(
            num_vars=n,
            objective=objective.tolist(),
            objective_constant=self.objective.constant,
            quadratic_diag=quadratic_diag,
            rows=rows,
            var_bounds=list(zip(self.lower, self.upper)),
            integrality=list(self.binary),
            var_names=list(self.names),
        )
