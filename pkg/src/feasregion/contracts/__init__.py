"""Typed contracts shared across feasregion."""

from feasregion.contracts.errors import (
    AssumptionViolationError,
    BigMTooSmallError,
    DatasetError,
    DimensionMismatchError,
    EmptyRegionError,
    FeasRegionError,
    InfeasibleImputationError,
    InternalInconsistencyError,
    NormalizationDegenerateError,
    SchemaError,
    SizeGuardError,
    SolverLimitError,
    UnboundedRegionError,
    ZeroCostVectorError,
)
from feasregion.contracts.diet import DietDataset, NutrientBound, ObjectiveKind
from feasregion.contracts.files import KnownBlock, ProblemFile, RegionFile
from feasregion.contracts.geometry import (
    ConstraintRow,
    NormalizationScheme,
    ObservationSet,
    Polyhedron,
)
from feasregion.contracts.messages import Message, err, warn
from feasregion.contracts.problem import (
    AdherenceLoss,
    AdjacencyLoss,
    CombinedLoss,
    CompactnessLoss,
    FairnessLoss,
    ForwardProblem,
    IndifferenceLoss,
    LossSpec,
    ProblemInstance,
    SideConstraint,
    SingleLoss,
)
from feasregion.contracts.reports import (
    CaseStudyReport,
    FoodComparison,
    ImputedRegion,
    RowDiagnostics,
    VerificationReport,
    Violation,
)
from feasregion.contracts.solver import (
    LinearRow,
    Relation,
    SolverModel,
    SolverResult,
    SolveStatus,
)

__all__ = [
    "AdherenceLoss",
    "AdjacencyLoss",
    "AssumptionViolationError",
    "BigMTooSmallError",
    "CaseStudyReport",
    "CombinedLoss",
    "CompactnessLoss",
    "ConstraintRow",
    "DatasetError",
    "DietDataset",
    "DimensionMismatchError",
    "EmptyRegionError",
    "FairnessLoss",
    "FeasRegionError",
    "FoodComparison",
    "ForwardProblem",
    "ImputedRegion",
    "IndifferenceLoss",
    "InfeasibleImputationError",
    "InternalInconsistencyError",
    "KnownBlock",
    "LinearRow",
    "LossSpec",
    "Message",
    "NormalizationDegenerateError",
    "NutrientBound",
    "ObjectiveKind",
    "NormalizationScheme",
    "ObservationSet",
    "Polyhedron",
    "ProblemFile",
    "ProblemInstance",
    "Relation",
    "RegionFile",
    "RowDiagnostics",
    "SchemaError",
    "SideConstraint",
    "SingleLoss",
    "SizeGuardError",
    "SolveStatus",
    "SolverLimitError",
    "SolverModel",
    "SolverResult",
    "UnboundedRegionError",
    "VerificationReport",
    "Violation",
    "ZeroCostVectorError",
    "err",
    "warn",
]
