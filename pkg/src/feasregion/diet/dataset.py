"""Loading, generating and summarising diet datasets."""

import json
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from feasregion.contracts.diet import DietDataset, NutrientBound, ObjectiveKind
from feasregion.contracts.errors import DatasetError
from feasregion.util.hashing import hash_dataset
from feasregion.util.logging import get_logger

logger = get_logger("diet.dataset")

PathLike = Union[str, Path]

# Nutrient content per serving, drawn uniformly from these ranges
NUTRIENT_RANGES: dict[str, tuple[float, float]] = {
    "calories": (20.0, 400.0),
    "protein": (0.0, 30.0),
    "fat": (0.0, 25.0),
    "carbohydrates": (0.0, 60.0),
    "fiber": (0.0, 10.0),
    "sugar": (0.0, 30.0),
    "cholesterol": (0.0, 120.0),
    "sodium": (0.0, 800.0),
}
LOWER_BOUNDED = ("carbohydrates", "fiber", "calories")
UPPER_BOUNDED = ("fat", "sugar", "cholesterol", "calories")

BOUND_TOL = 1e-9


def _numeric_frame(df: pd.DataFrame, what: str) -> pd.DataFrame:
    numeric = df.apply(pd.to_numeric, errors="coerce")
    if numeric.isna().any().any():
        row, col = next(
            (r, c) for r, c in zip(*np.nonzero(numeric.isna().to_numpy()))
        )
        raise DatasetError(
            f"{what} has a non-numeric cell at row {row}, column {df.columns[col]!r}",
            reason="schema_mismatch",
        )
    return numeric.astype(float)


def _read_bounds(path: PathLike) -> tuple[dict[str, NutrientBound], Optional[float]]:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise DatasetError(
            f"bounds file is not valid JSON (line {e.lineno}, column {e.colno})",
            reason="schema_mismatch",
        ) from e
    if not isinstance(raw, dict):
        raise DatasetError("bounds file must hold a JSON object", reason="schema_mismatch")
    total = raw.pop("max_total_servings", None)
    try:
        bounds = {name: NutrientBound.model_validate(spec) for name, spec in raw.items()}
    except ValueError as e:
        raise DatasetError(f"invalid nutrient bound: {e}", reason="schema_mismatch") from e
    return bounds, None if total is None else float(total)


def load_dataset(
    observations_csv: PathLike,
    nutrients_csv: PathLike,
    bounds_config: PathLike,
    *,
    objective_kind: ObjectiveKind = ObjectiveKind.min_sodium,
    auto_relax: bool = False,
) -> DietDataset:
    """Load and validate a diet dataset.

    Args:
        observations_csv: One row per day, one column per food
        nutrients_csv: One row per food; first column is the food name
        bounds_config: JSON map of nutrient limits plus ``max_total_servings``
        objective_kind: Forward objective recorded with the dataset
        auto_relax: Widen bounds the observations violate instead of failing

    Raises:
        DatasetError: ``reason`` is ``schema_mismatch``, ``negative_servings``
            or ``bound_violated``
    """
    try:
        obs_df = pd.read_csv(observations_csv, float_precision="round_trip")
        nut_df = pd.read_csv(nutrients_csv, index_col=0, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DatasetError(f"cannot parse dataset CSV: {e}", reason="schema_mismatch") from e

    foods = [str(c) for c in obs_df.columns]
    nut_df.index = nut_df.index.map(str)
    missing = sorted(set(foods) - set(nut_df.index))
    extra = sorted(set(nut_df.index) - set(foods))
    if missing or extra:
        raise DatasetError(
            "observation columns and nutrient rows name different foods",
            reason="schema_mismatch",
            missing_nutrients=missing,
            unobserved_foods=extra,
        )
    if obs_df.empty:
        raise DatasetError("observations file has no rows", reason="schema_mismatch")

    X = _numeric_frame(obs_df, "observations").to_numpy()
    nut_df = _numeric_frame(nut_df.loc[foods], "nutrients")
    nutrients = [str(c) for c in nut_df.columns]
    required = "protein" if ObjectiveKind(objective_kind) == ObjectiveKind.max_protein else "sodium"
    if required not in nutrients:
        raise DatasetError(f"nutrients file lacks the {required!r} column",
                           reason="schema_mismatch")

    negative = np.argwhere(X < 0.0)
    if negative.size:
        day, food = negative[0]
        raise DatasetError(
            f"negative servings of {foods[food]!r} on day {day}",
            reason="negative_servings",
            day=int(day),
            food=foods[food],
        )

    bounds, total_cap = _read_bounds(bounds_config)
    unknown = sorted(set(bounds) - set(nutrients))
    if unknown:
        raise DatasetError(f"bounds name unknown nutrients: {unknown}", reason="schema_mismatch")

    intake = X @ nut_df.to_numpy()
    for name, bound in list(bounds.items()):
        column = intake[:, nutrients.index(name)]
        lower, upper = bound.lower, bound.upper
        if lower is not None and column.min() < lower - BOUND_TOL:
            day = int(column.argmin())
            if not auto_relax:
                raise DatasetError(
                    f"day {day} violates the lower bound on {name} ({column[day]:g} < {lower:g})",
                    reason="bound_violated", nutrient=name, bound="lower", day=day,
                )
            logger.warning("Relaxing %s lower bound %g -> %g", name, lower, column.min())
            lower = float(column.min())
        if upper is not None and column.max() > upper + BOUND_TOL:
            day = int(column.argmax())
            if not auto_relax:
                raise DatasetError(
                    f"day {day} violates the upper bound on {name} ({column[day]:g} > {upper:g})",
                    reason="bound_violated", nutrient=name, bound="upper", day=day,
                )
            logger.warning("Relaxing %s upper bound %g -> %g", name, upper, column.max())
            upper = float(column.max())
        bounds[name] = NutrientBound(lower=lower, upper=upper)

    if total_cap is not None:
        totals = X.sum(axis=1)
        if totals.max() > total_cap + BOUND_TOL:
            day = int(totals.argmax())
            if not auto_relax:
                raise DatasetError(
                    f"day {day} exceeds the total-servings cap ({totals[day]:g} > {total_cap:g})",
                    reason="bound_violated", nutrient="max_total_servings", bound="upper", day=day,
                )
            logger.warning("Relaxing total-servings cap %g -> %g", total_cap, totals.max())
            total_cap = float(totals.max())

    return DietDataset(
        foods=foods,
        nutrients=nutrients,
        observations=X.tolist(),
        nutrient_matrix=nut_df.to_numpy().tolist(),
        bounds=bounds,
        max_total_servings=total_cap,
        objective_kind=objective_kind,
        dataset_hash=hash_dataset(Path(observations_csv), Path(nutrients_csv), Path(bounds_config)),
    )


def _two_decimals(values: np.ndarray) -> np.ndarray:
    """Round through the CSV text form so files and memory hold identical floats."""
    return np.vectorize(lambda v: float(f"{v:.2f}"))(values).astype(float)


def generate_synthetic_dataset(
    seed: int = 42,
    n: int = 26,
    K: int = 100,
    sparsity: Optional[float] = None,
    out_dir: Optional[PathLike] = None,
) -> DietDataset:
    """Deterministic synthetic diet data whose bounds hold by construction.

    Each food is eaten on 20-100% of days (scaled to ``1 - sparsity`` on
    average when given) with a mean serving between 0.2 and 5.0. Bounds are
    the observed nutrient envelope rounded outward to 0.01.

    When ``out_dir`` is set, ``observations.csv``, ``nutrients.csv`` and
    ``bounds.json`` are written there.
    """
    if n < 2 or K < 2:
        raise ValueError(f"need n >= 2 and K >= 2, got n={n}, K={K}")
    if sparsity is not None and not 0.0 <= sparsity < 1.0:
        raise ValueError(f"sparsity must be in [0, 1), got {sparsity}")

    rng = np.random.default_rng(seed)
    foods = [f"food_{j:02d}" for j in range(n)]
    nutrients = list(NUTRIENT_RANGES)

    frequency = rng.integers(20, 101, size=n) / 100.0
    if sparsity is not None:
        frequency = np.clip(frequency * (1.0 - sparsity) / frequency.mean(), 0.01, 1.0)
    mean_servings = rng.uniform(0.2, 5.0, size=n)
    eaten = rng.random((K, n)) < frequency
    amounts = rng.gamma(shape=4.0, scale=mean_servings / 4.0, size=(K, n))
    X = _two_decimals(np.where(eaten, amounts, 0.0))

    N = _two_decimals(
        np.column_stack([rng.uniform(lo, hi, size=n) for lo, hi in NUTRIENT_RANGES.values()])
    )

    intake = X @ N
    bounds: dict[str, NutrientBound] = {}
    for name in nutrients:
        column = intake[:, nutrients.index(name)]
        lower = math.floor(column.min() * 100.0) / 100.0 if name in LOWER_BOUNDED else None
        upper = math.ceil(column.max() * 100.0) / 100.0 if name in UPPER_BOUNDED else None
        if lower is not None or upper is not None:
            bounds[name] = NutrientBound(lower=lower, upper=upper)
    total_cap = math.ceil(X.sum(axis=1).max() * 100.0) / 100.0

    dataset = DietDataset(
        foods=foods,
        nutrients=nutrients,
        observations=X.tolist(),
        nutrient_matrix=N.tolist(),
        bounds=bounds,
        max_total_servings=total_cap,
    )
    if out_dir is not None:
        dataset = write_dataset(dataset, out_dir)
    logger.info("Generated synthetic diet dataset: seed=%d, %d foods, %d days", seed, n, K)
    return dataset


def write_dataset(ds: DietDataset, out_dir: PathLike) -> DietDataset:
    """Write the three dataset files and return the dataset with their hash."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = (out / "observations.csv", out / "nutrients.csv", out / "bounds.json")

    pd.DataFrame(ds.observations, columns=ds.foods).to_csv(
        paths[0], index=False, float_format="%.2f", lineterminator="\n"
    )
    nutrient_df = pd.DataFrame(ds.nutrient_matrix, columns=ds.nutrients, index=ds.foods)
    nutrient_df.index.name = "food"
    nutrient_df.to_csv(paths[1], float_format="%.2f", lineterminator="\n")

    config: dict = {
        name: bound.model_dump(exclude_none=True) for name, bound in ds.bounds.items()
    }
    if ds.max_total_servings is not None:
        config["max_total_servings"] = ds.max_total_servings
    paths[2].write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")

    return ds.model_copy(update={"dataset_hash": hash_dataset(*paths)})


def summarize_consumption(ds: DietDataset) -> pd.DataFrame:
    """Per food: days consumed, mean and standard deviation of servings on those days."""
    df = pd.DataFrame(ds.observations, columns=ds.foods)
    eaten = df.where(df > 0.0)
    return pd.DataFrame(
        {
            "food": ds.foods,
            "days_consumed": (df > 0.0).sum().to_numpy(),
            "mean_servings": eaten.mean().fillna(0.0).to_numpy(),
            "std_servings": eaten.std().fillna(0.0).to_numpy(),
        }
    )
