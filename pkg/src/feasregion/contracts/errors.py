"""Exception hierarchy for feasregion.

Every exception carries a :class:`Message` so callers (and the CLI) can
report a stable machine code together with debugging context.
"""

from typing import Any

from feasregion.contracts.messages import Message, err


class FeasRegionError(Exception):
    """Base class for all library errors."""

    code = "feasregion_error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.detail: Message = err(self.code, message, **context)

    @property
    def context(self) -> dict[str, Any]:
        return self.detail.context


class DimensionMismatchError(FeasRegionError, ValueError):
    code = "dimension_mismatch"


class ZeroCostVectorError(FeasRegionError, ValueError):
    code = "zero_cost_vector"


class NormalizationDegenerateError(FeasRegionError, ValueError):
    """A row cannot be put in SumProxy form because its coefficients sum to zero."""

    code = "normalization_degenerate"


class EmptyRegionError(FeasRegionError):
    code = "empty_region"


class UnboundedRegionError(FeasRegionError):
    code = "unbounded_region"


class SizeGuardError(FeasRegionError):
    """The active-set QP would enumerate too many subsets; use L1 adherence instead."""

    code = "qp_size_guard"


class SolverLimitError(FeasRegionError):
    """Pivot or node cap exhausted; ``context['subproblem']`` names the solve."""

    code = "solver_limit"


class InfeasibleImputationError(FeasRegionError):
    code = "infeasible_imputation"


class BigMTooSmallError(FeasRegionError):
    """Compactness big-M dominated by a slack distance; see ``suggested_big_m``."""

    code = "big_m_too_small"

    @property
    def suggested_big_m(self) -> float:
        return float(self.context.get("suggested_big_m", 0.0))


class AssumptionViolationError(FeasRegionError, ValueError):
    code = "known_set_invalid"


class DatasetError(FeasRegionError, ValueError):
    """Diet dataset rejected at load; ``context['reason']`` holds the specific check."""

    code = "dataset_error"


class SchemaError(FeasRegionError, ValueError):
    code = "schema_error"


class InternalInconsistencyError(FeasRegionError):
    code = "internal_inconsistency"
