"""Tests for diet datasets and the diet case study."""

import json
import time

import numpy as np
import pandas as pd
import pytest

from feasregion.contracts.diet import DietDataset, NutrientBound, ObjectiveKind
from feasregion.contracts.errors import DatasetError
from feasregion.contracts.geometry import ObservationSet, Polyhedron
from feasregion.contracts.problem import AdjacencyLoss
from feasregion.diet import (
    avg_l1_distance,
    export_comparison_csv,
    generate_synthetic_dataset,
    load_dataset,
    recommend_diet,
    run_case_study,
    summarize_consumption,
)
from feasregion.geometry import is_valid_set


def _write_files(tmp_path, observations, nutrients, bounds):
    obs_path = tmp_path / "observations.csv"
    nut_path = tmp_path / "nutrients.csv"
    bounds_path = tmp_path / "bounds.json"
    pd.DataFrame(observations).to_csv(obs_path, index=False)
    df = pd.DataFrame(nutrients).T
    df.index.name = "food"
    df.to_csv(nut_path)
    bounds_path.write_text(json.dumps(bounds))
    return obs_path, nut_path, bounds_path


@pytest.fixture
def tiny_files(tmp_path):
    """Two foods over three days with sodium and protein columns."""
    return _write_files(
        tmp_path,
        {"bread": [1.0, 2.0, 0.0], "beans": [1.0, 0.5, 2.0]},
        {"bread": {"sodium": 100.0, "protein": 3.0}, "beans": {"sodium": 10.0, "protein": 7.0}},
        {"protein": {"lower": 5.0}, "max_total_servings": 3.0},
    )


class TestSyntheticDataset:
    """Tests for generate_synthetic_dataset."""

    def test_deterministic(self):
        """The same seed gives the same data; another seed does not."""
        first = generate_synthetic_dataset(seed=7, n=5, K=12)
        again = generate_synthetic_dataset(seed=7, n=5, K=12)
        other = generate_synthetic_dataset(seed=8, n=5, K=12)
        assert first.observations == again.observations
        assert first.bounds == again.bounds
        assert first.observations != other.observations

    def test_observations_satisfy_known_rows(self):
        """Bounds are the observed envelope, so every day is feasible."""
        ds = generate_synthetic_dataset(seed=3, n=6, K=20)
        valid, violations = is_valid_set(ds.known_polyhedron(), ObservationSet(points=ds.observations))
        assert valid, violations
        assert np.all(ds.X >= 0.0)

    def test_written_files_reload(self, tmp_path):
        """Files written to disk load back to the same numbers and hash."""
        ds = generate_synthetic_dataset(seed=5, n=4, K=10, out_dir=tmp_path)
        loaded = load_dataset(
            tmp_path / "observations.csv", tmp_path / "nutrients.csv", tmp_path / "bounds.json"
        )
        assert loaded.foods == ds.foods
        assert loaded.observations == ds.observations
        assert loaded.nutrient_matrix == ds.nutrient_matrix
        assert loaded.dataset_hash == ds.dataset_hash
        assert loaded.max_total_servings == ds.max_total_servings

    def test_sparsity(self):
        """Higher sparsity leaves more zero servings."""
        dense = generate_synthetic_dataset(seed=2, n=10, K=50, sparsity=0.1)
        sparse = generate_synthetic_dataset(seed=2, n=10, K=50, sparsity=0.8)
        assert (sparse.X == 0.0).sum() > (dense.X == 0.0).sum()

    def test_rejects_bad_arguments(self):
        """Degenerate sizes and sparsities are rejected."""
        with pytest.raises(ValueError):
            generate_synthetic_dataset(n=1)
        with pytest.raises(ValueError):
            generate_synthetic_dataset(sparsity=1.0)


class TestLoadDataset:
    """Tests for load_dataset validation."""

    def test_valid(self, tiny_files):
        """A consistent dataset loads with its bounds and cap."""
        ds = load_dataset(*tiny_files)
        assert ds.foods == ["bread", "beans"]
        assert ds.K == 3
        assert ds.bounds["protein"] == NutrientBound(lower=5.0)
        assert ds.max_total_servings == 3.0
        assert ds.cost_vector(ObjectiveKind.min_sodium).tolist() == [100.0, 10.0]
        assert ds.cost_vector(ObjectiveKind.max_protein).tolist() == [-3.0, -7.0]

    def test_negative_servings(self, tmp_path):
        """Negative servings are a data error."""
        files = _write_files(
            tmp_path,
            {"bread": [1.0, -1.0]},
            {"bread": {"sodium": 1.0}},
            {},
        )
        with pytest.raises(DatasetError) as info:
            load_dataset(*files)
        assert info.value.context["reason"] == "negative_servings"

    def test_food_mismatch(self, tmp_path):
        """Observation columns must match the nutrient rows."""
        files = _write_files(
            tmp_path,
            {"bread": [1.0]},
            {"rice": {"sodium": 1.0}},
            {},
        )
        with pytest.raises(DatasetError) as info:
            load_dataset(*files)
        assert info.value.context["reason"] == "schema_mismatch"

    def test_bound_violated(self, tmp_path):
        """A day outside the bounds fails unless relaxation is requested."""
        files = _write_files(
            tmp_path,
            {"bread": [1.0, 4.0]},
            {"bread": {"sodium": 100.0}},
            {"sodium": {"upper": 300.0}},
        )
        with pytest.raises(DatasetError) as info:
            load_dataset(*files)
        assert info.value.context["reason"] == "bound_violated"

        relaxed = load_dataset(*files, auto_relax=True)
        assert relaxed.bounds["sodium"].upper == pytest.approx(400.0)

    def test_invalid_bounds_json(self, tiny_files):
        """Unparseable bounds are a schema error."""
        tiny_files[2].write_text("{not json")
        with pytest.raises(DatasetError) as info:
            load_dataset(*tiny_files)
        assert info.value.context["reason"] == "schema_mismatch"

    def test_missing_objective_column(self, tiny_files):
        """The objective's nutrient column must exist."""
        nutrients = pd.read_csv(tiny_files[1], index_col=0).drop(columns=["protein"])
        nutrients.to_csv(tiny_files[1])
        with pytest.raises(DatasetError):
            load_dataset(*tiny_files, objective_kind=ObjectiveKind.max_protein)


class TestRecommendations:
    """Tests for avg_l1_distance and recommend_diet."""

    def test_avg_l1_distance(self):
        """Mean of per-observation L1 distances."""
        assert avg_l1_distance([[0, 0], [2, 2]], [1, 1]) == pytest.approx(2.0)
        with pytest.raises(ValueError):
            avg_l1_distance([[0, 0]], [1, 1, 1])

    def test_avg_l1_distance_case_i(self):
        """Against (2, 2) the five unit-square observations average 1.0."""
        points = [[2, 2], [1, 1], [1, 2], [2, 1], [1.5, 1.5]]
        assert avg_l1_distance(points, [2, 2]) == pytest.approx(1.0)

    def test_tie_break_prefers_observations(self):
        """Among optimal points, the one closest to the data in L1 is chosen."""
        # min x1 + x2 over x1 + x2 >= 1, x >= 0: the whole segment is optimal
        region = Polyhedron.from_matrix([[1, 1], [1, 0], [0, 1]], [1, 0, 0])
        diet = recommend_diet(region, [1.0, 1.0], [[0.9, 0.1], [0.8, 0.2], [1.0, 0.0]])
        assert diet.sum() == pytest.approx(1.0)
        assert diet == pytest.approx([0.9, 0.1], abs=1e-7)

    def test_single_day_reproduced(self):
        """With one observation the imputed region recommends that day."""
        ds = DietDataset(
            foods=["a", "b", "c"],
            nutrients=["sodium"],
            observations=[[1.0, 2.0, 0.5]],
            nutrient_matrix=[[10.0], [5.0], [1.0]],
            bounds={"sodium": NutrientBound(lower=5.0)},
        )
        report = run_case_study(ds, m1=2, loss=AdjacencyLoss())
        assert report.diet_with_mio == pytest.approx([1.0, 2.0, 0.5], abs=1e-6)
        assert report.avg_l1_with == pytest.approx(0.0, abs=1e-6)
        assert report.verification.all_ok


class TestCaseStudy:
    """Tests for run_case_study on small synthetic data."""

    @pytest.fixture
    def dataset(self):
        return generate_synthetic_dataset(seed=11, n=3, K=6)

    def test_default_loss(self, dataset):
        """Fairness then compactness yields a verified region and two diets."""
        report = run_case_study(dataset, m1=2)
        assert report.loss_kind == "combined"
        assert report.verification.all_ok
        assert len(report.diet_with_mio) == dataset.n
        assert len(report.comparison) == dataset.n

    def test_imputed_rows_only_tighten(self, dataset):
        """The imputed diet costs at least the known-only diet and equals c'x0."""
        report = run_case_study(dataset, m1=2, loss=AdjacencyLoss())
        c = dataset.cost_vector()
        with_cost = float(c @ np.asarray(report.diet_with_mio))
        without_cost = float(c @ np.asarray(report.diet_without_mio))
        x0 = dataset.X[report.preferred_index]
        assert with_cost >= without_cost - 1e-7
        assert with_cost == pytest.approx(float(c @ x0), abs=1e-6 * max(1.0, abs(c @ x0)))

    def test_max_protein(self, dataset):
        """The protein objective is a negated minimisation."""
        report = run_case_study(
            dataset, m1=1, loss=AdjacencyLoss(), objective_kind=ObjectiveKind.max_protein
        )
        assert report.objective_kind == "max-protein"
        protein = dataset.nutrient_column("protein")
        x0 = dataset.X[report.preferred_index]
        assert protein @ x0 == pytest.approx(dataset.X.dot(protein).max())

    def test_exports(self, dataset, tmp_path):
        """The per-food comparison exports one row per food."""
        report = run_case_study(dataset, m1=1, loss=AdjacencyLoss())
        path = tmp_path / "comparison.csv"
        export_comparison_csv(report, path)
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["food", "observed_mean", "without_mio", "with_mio"]
        assert len(frame) == dataset.n

    def test_consumption_summary(self, dataset):
        """Days consumed count positive servings."""
        summary = summarize_consumption(dataset)
        assert summary["days_consumed"].tolist() == (dataset.X > 0).sum(axis=0).tolist()
        assert (summary["mean_servings"] >= 0).all()

    def test_pooled_rows_on_larger_data(self):
        """A model above the binary limit still yields a verified region quickly."""
        ds = generate_synthetic_dataset(seed=5, n=8, K=30)
        start = time.perf_counter()
        report = run_case_study(ds, m1=10)
        assert time.perf_counter() - start < 60.0
        assert report.verification.all_ok
        assert report.loss_value >= 0.0

    @pytest.mark.slow
    def test_full_scale_budget(self):
        """Twenty-six foods, a hundred days and thirty rows finish within two minutes."""
        ds = generate_synthetic_dataset(seed=42, n=26, K=100)
        start = time.perf_counter()
        report = run_case_study(ds, m1=30)
        assert time.perf_counter() - start < 120.0
        assert report.verification.all_ok
        diets = ObservationSet(points=[report.diet_without_mio, report.diet_with_mio])
        assert is_valid_set(ds.known_polyhedron(), diets)[0]
