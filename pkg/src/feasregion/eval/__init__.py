"""Golden-case evaluation package."""

from feasregion.eval.harness import EvalHarness
from feasregion.eval.scoring import EvalResult, score_region

__all__ = [
    "EvalHarness",
    "EvalResult",
    "score_region",
]
