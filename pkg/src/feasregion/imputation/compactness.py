"""Bounds, candidate rows and greedy row selection for compactness."""

from collections.abc import Sequence
from typing import Optional

import numpy as np

from feasregion.contracts.errors import InfeasibleImputationError
from feasregion.contracts.problem import ProblemInstance
from feasregion.contracts.solver import Relation
from feasregion.engine import ModelBuilder
from feasregion.imputation.decomposed import (
    RowVars,
    adjacency_objective,
    slack_objective,
    solve_all_branches,
)
from feasregion.util.logging import get_logger

logger = get_logger("imputation.compactness")


def _distinct_row_indices(p: ProblemInstance) -> list[int]:
    """One representative row per distinct set of side constraints."""
    if p.rows_share_constraints:
        return [0]
    return list(range(p.m1))


def observation_lower_bounds(p: ProblemInstance) -> np.ndarray:
    """Smallest slack any single feasible row can leave at each observation.

    ``m_k >= LB_k`` is valid for every feasible row set, since the nearest
    row to ``x^k`` is itself one feasible row.
    """
    points = p.observations.points
    bounds = np.full(len(points), np.inf)
    for index in _distinct_row_indices(p):
        for k, point in enumerate(points):
            branches = solve_all_branches(p, index, slack_objective(point), f"lb[{index}][{k}]")
            for branch in branches:
                bounds[k] = min(bounds[k], branch.value)
    if not np.all(np.isfinite(bounds)):
        raise InfeasibleImputationError(
            "no feasible row exists; side constraints contradict the observations"
        )
    return np.maximum(bounds, 0.0)


def compactness_candidates(p: ProblemInstance) -> list[tuple[np.ndarray, float]]:
    """Candidate rows: each observation's nearest rows and total-slack rows through it.

    Every sign branch contributes; duplicates within 1e-9 are dropped and
    first occurrences kept.

    Returns:
        Valid rows ``(a, b)`` for row 0, in observation order
    """
    candidates: list[tuple[np.ndarray, float]] = []
    points = p.observations.points

    for k, point in enumerate(points):
        for branch in solve_all_branches(p, 0, slack_objective(point), f"cand-near[{k}]"):
            candidates.append(branch.row_values())

        def through_point(builder: ModelBuilder, row: RowVars, point=point) -> None:
            builder.add_constraint(row.slack(point), Relation.le, 0.0, name="anchor")

        for branch in solve_all_branches(
            p, 0, adjacency_objective(p), f"cand-anchor[{k}]", extra=through_point
        ):
            candidates.append(branch.row_values())

    unique: list[tuple[np.ndarray, float]] = []
    for a, b in candidates:
        if not any(np.allclose(a, ua, atol=1e-9) and abs(b - ub) <= 1e-9 for ua, ub in unique):
            unique.append((a, b))
    return unique


def greedy_compactness_rows(
    candidates: Sequence[tuple[np.ndarray, float]],
    distances: np.ndarray,
    m1: int,
    quotas: Optional[tuple[int, int]] = None,
) -> list[int]:
    """Pick ``m1`` candidate indices minimising ``sum_k min_i distances[i, k]``.

    Greedy insertion followed by single-swap local search; ties go to the
    lowest candidate index.

    Args:
        candidates: Candidate rows ``(a, b)``
        distances: ``distances[i, k]`` is the slack of observation k in candidate i
        m1: Number of rows to pick
        quotas: Optional ``(positive, negative)`` counts by the sign of
            ``sum(a)``; they must add up to ``m1``. Swaps keep the sign.

    Returns:
        Chosen indices, fewer than ``m1`` when a quota cannot be filled
    """
    if len(candidates) == 0:
        return []
    D = np.asarray(distances, dtype=float)
    signs = np.array([1 if np.sum(a) > 0 else -1 for a, _ in candidates])
    remaining = {1: quotas[0], -1: quotas[1]} if quotas is not None else None

    def total(selection: list[int]) -> float:
        return float(D[selection].min(axis=0).sum())

    chosen: list[int] = []
    nearest = np.full(D.shape[1], np.inf)
    for _ in range(m1):
        totals = np.minimum(nearest[None, :], D).sum(axis=1)
        if remaining is not None:
            open_sign = np.array([remaining[s] > 0 for s in signs])
            if not open_sign.any():
                break
            totals = np.where(open_sign, totals, np.inf)
        pick = int(np.argmin(totals))
        if remaining is not None:
            if remaining[signs[pick]] <= 0:
                break
            remaining[signs[pick]] -= 1
        chosen.append(pick)
        nearest = np.minimum(nearest, D[pick])
    if len(chosen) < m1:
        return chosen

    current = total(chosen)
    improved = True
    while improved:
        improved = False
        for slot in range(m1):
            others = [c for i, c in enumerate(chosen) if i != slot]
            base = D[others].min(axis=0) if others else np.full(D.shape[1], np.inf)
            totals = np.minimum(base[None, :], D).sum(axis=1)
            if quotas is not None:
                totals = np.where(signs == signs[chosen[slot]], totals, np.inf)
            pick = int(np.argmin(totals))
            if totals[pick] < current - 1e-12 * max(1.0, current):
                chosen[slot] = pick
                current = total(chosen)
                improved = True

    logger.debug("Greedy compactness start %.9g from %d candidates", current, len(candidates))
    return chosen
