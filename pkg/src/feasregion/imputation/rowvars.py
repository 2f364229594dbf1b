"""Decision variables of one imputed row ``a_i . x >= b_i``.

A row is added to a :class:`ModelBuilder` together with its normalization
and the feasibility of every observation. The normalization depends on the
branch:

* sum-proxy with a fixed sign ``s``: ``sum_j a_ij = s``;
* sum-proxy without a sign: binary ``z_i`` with ``sum_j a_ij = 2 z_i - 1``;
* l1-exact without an orthant: ``a = p - q`` with ``sum (p + q) = 1`` and one
  binary per coordinate choosing which of ``p_j``, ``q_j`` may be positive;
* l1-exact with an orthant ``s``: ``s_j a_ij >= 0`` and ``sum_j s_j a_ij = 1``.
"""

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from feasregion.contracts.geometry import NormalizationScheme
from feasregion.contracts.problem import ProblemInstance
from feasregion.contracts.solver import Relation
from feasregion.engine import LinExpr, ModelBuilder, dot

Branch = Union[int, tuple[int, ...], None]


@dataclass
class RowVars:
    index: int
    a: list[LinExpr]
    b: LinExpr
    branch: Branch
    z: Optional[LinExpr] = None
    pos: list[LinExpr] = field(default_factory=list)
    neg: list[LinExpr] = field(default_factory=list)
    orient: list[LinExpr] = field(default_factory=list)

    def slack(self, point) -> LinExpr:
        """``a_i . x - b_i`` for a fixed point ``x``."""
        return dot(point, self.a) - self.b

    def values(self, solution) -> tuple[np.ndarray, float]:
        a = np.array([expr.value(solution) for expr in self.a])
        return a, self.b.value(solution)

    def binaries(self) -> list[LinExpr]:
        return ([self.z] if self.z is not None else []) + list(self.orient)

    def start_values(self, a: np.ndarray, b: float) -> dict[int, float]:
        """Variable assignment reproducing the row ``(a, b)``."""
        out: dict[int, float] = {}
        (b_index,) = self.b.terms
        out[b_index] = float(b)
        if self.pos:
            for j, value in enumerate(a):
                (p,), (q,), (s,) = self.pos[j].terms, self.neg[j].terms, self.orient[j].terms
                out[p] = max(value, 0.0)
                out[q] = max(-value, 0.0)
                out[s] = 1.0 if value > 0.0 else 0.0
        else:
            for j, value in enumerate(a):
                (index,) = self.a[j].terms
                out[index] = float(value)
            if self.z is not None:
                (z_index,) = self.z.terms
                out[z_index] = 1.0 if a.sum() > 0.0 else 0.0
        return out


def sign_branches(p: ProblemInstance, quadratic: bool = False) -> list[Branch]:
    """Branches enumerated by per-row subproblems, in tie-break order."""
    if p.normalization == NormalizationScheme.sum_proxy:
        return [1, -1]
    if quadratic:
        return list(itertools.product((1, -1), repeat=p.n))
    return [None]


def add_row_vars(
    builder: ModelBuilder, p: ProblemInstance, index: int, branch: Branch = None
) -> RowVars:
    """Add row ``index`` with its normalization, observation feasibility and side constraints."""
    n = p.n
    tag = f"[{index}]"

    if p.normalization == NormalizationScheme.sum_proxy:
        a = builder.add_vars(f"a{tag}", n)
        rv = RowVars(index=index, a=a, b=builder.add_var(f"b{tag}"), branch=branch)
        if branch is None:
            rv.z = builder.add_var(f"z{tag}", binary=True)
            builder.add_constraint(
                LinExpr.total(a) - 2.0 * rv.z, Relation.eq, -1.0, name=f"norm{tag}"
            )
        else:
            builder.add_constraint(LinExpr.total(a), Relation.eq, float(branch), name=f"norm{tag}")
    elif branch is None:
        pos = builder.add_vars(f"p{tag}", n, lower=0.0, upper=1.0)
        neg = builder.add_vars(f"q{tag}", n, lower=0.0, upper=1.0)
        orient = builder.add_vars(f"s{tag}", n, binary=True)
        a = [pj - qj for pj, qj in zip(pos, neg)]
        rv = RowVars(
            index=index, a=a, b=builder.add_var(f"b{tag}"), branch=branch,
            pos=pos, neg=neg, orient=orient,
        )
        for j in range(n):
            builder.add_constraint(pos[j] - orient[j], Relation.le, 0.0)
            builder.add_constraint(neg[j] + orient[j], Relation.le, 1.0)
        builder.add_constraint(LinExpr.total(pos + neg), Relation.eq, 1.0, name=f"norm{tag}")
    else:
        a = [
            builder.add_var(
                f"a{tag}[{j}]",
                lower=0.0 if s > 0 else -np.inf,
                upper=np.inf if s > 0 else 0.0,
            )
            for j, s in enumerate(branch)
        ]
        rv = RowVars(index=index, a=a, b=builder.add_var(f"b{tag}"), branch=branch)
        builder.add_constraint(dot(branch, a), Relation.eq, 1.0, name=f"norm{tag}")

    for k, point in enumerate(p.observations.points):
        builder.add_constraint(rv.slack(point), Relation.ge, 0.0, name=f"feas{tag}[{k}]")

    for side in p.side_constraints_for(index):
        builder.add_constraint(
            dot(side.a_coefficients, rv.a) + side.b_coefficient * rv.b,
            side.relation,
            side.rhs,
            name=f"side{tag}",
        )
    return rv
