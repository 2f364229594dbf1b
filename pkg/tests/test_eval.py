"""Tests for golden-case scoring and the evaluation harness."""

import pytest
import yaml

from feasregion.contracts.problem import AdjacencyLoss
from feasregion.eval import EvalHarness, score_region
from feasregion.imputation import impute


class TestScoreRegion:
    """Tests for score_region."""

    @pytest.fixture
    def region(self, case_i):
        return impute(case_i, AdjacencyLoss())

    def test_all_checks_pass(self, region):
        """Matching expectations pass with one note per check."""
        result = score_region(
            "adjacency",
            region,
            {"loss_value": 10.0, "rows": [[0.0, 1.0, 1.0]] * 4, "forward_optimum": -4.0,
             "verification": True},
        )
        assert result.passed, result.message
        assert len(result.details["checks_passed"]) == 4

    def test_wrong_loss_fails(self, region):
        """A wrong loss value is reported."""
        result = score_region("adjacency", region, {"loss_value": 9.0})
        assert not result.passed
        assert "loss" in result.message

    def test_unbounded_vertices_fail(self, region):
        """Vertices of an unbounded region cannot match."""
        result = score_region("adjacency", region, {"vertices": [[1.0, 1.0]]})
        assert not result.passed
        assert "vertices unavailable" in result.message

    def test_no_checks(self, region):
        """An empty expectation is not a pass."""
        assert not score_region("empty", region, {}).passed


class TestEvalHarness:
    """Tests for EvalHarness."""

    def test_multi_document_yaml(self, tmp_path, cases_dir):
        """Cases may be spread over several YAML documents."""
        case = {
            "name": "single-row",
            "problem": str(cases_dir / "case_i.json"),
            "loss": {"kind": "adjacency"},
            "m1": 1,
            "expected": {"loss_value": 2.5},
        }
        path = tmp_path / "cases.yaml"
        path.write_text(yaml.safe_dump(case) + "---\n" + yaml.safe_dump([case]))
        harness = EvalHarness()
        results = harness.run_all(path)
        assert len(results) == 2
        assert all(r.passed for r in results)
        assert harness.summary(results)["pass_rate"] == 1.0

    def test_unexpected_error(self, tmp_path, cases_dir):
        """An error the case did not expect fails it with the error code."""
        harness = EvalHarness(base_dir=cases_dir)
        result = harness.run_case({
            "name": "contradiction",
            "problem": "case_i_fixed_rhs.json",
            "loss": {"kind": "adjacency"},
            "expected": {"loss_value": 0.0},
        })
        assert not result.passed
        assert result.error == "infeasible_imputation"

    def test_missing_expected_error(self, cases_dir):
        """A case expecting an error fails when imputation succeeds."""
        harness = EvalHarness(base_dir=cases_dir)
        result = harness.run_case({
            "name": "no-error",
            "problem": "case_i.json",
            "expected": {"error": "infeasible_imputation"},
        })
        assert not result.passed

    @pytest.mark.slow
    def test_bundled_cases(self, cases_dir):
        """Every bundled golden case passes."""
        harness = EvalHarness()
        results = harness.run_all(cases_dir / "eval_cases.yaml")
        failures = [(r.name, r.message) for r in results if not r.passed]
        assert not failures
