"""Diet case study: datasets, recommendations and reports."""

from feasregion.diet.case_study import (
    avg_l1_distance,
    comparison_frame,
    default_diet_loss,
    export_comparison_csv,
    recommend_diet,
    run_case_study,
)
from feasregion.diet.dataset import (
    generate_synthetic_dataset,
    load_dataset,
    summarize_consumption,
    write_dataset,
)

__all__ = [
    "avg_l1_distance",
    "comparison_frame",
    "default_diet_loss",
    "export_comparison_csv",
    "generate_synthetic_dataset",
    "load_dataset",
    "recommend_diet",
    "run_case_study",
    "summarize_consumption",
    "write_dataset",
]
