"""Tests for problem and region files and the SVG renderer."""

import json

import pytest
from pydantic import ValidationError

from feasregion.contracts.files import ProblemFile, RegionFile
from feasregion.contracts.geometry import ConstraintRow
from feasregion.contracts.problem import (
    AdherenceLoss,
    AdjacencyLoss,
    CombinedLoss,
    IndifferenceLoss,
)
from feasregion.imputation import impute
from feasregion.render import clip_row, render_region_svg, write_svg


class TestProblemFile:
    """Tests for ProblemFile parsing."""

    def test_case_files_load(self, cases_dir):
        """Every bundled problem file parses into a valid instance."""
        for path in sorted(cases_dir.glob("*.json")):
            instance = ProblemFile.load(path).to_instance()
            assert instance.n == 2

    def test_adherence_loss_parsed(self, cases_dir):
        """The loss block selects the adherence variant."""
        problem = ProblemFile.load(cases_dir / "case_i_adherence.json")
        assert isinstance(problem.loss, AdherenceLoss)
        assert problem.loss.distance == "l2"

    def test_unknown_key_rejected(self):
        """Typos in keys are schema errors."""
        with pytest.raises(ValidationError):
            ProblemFile.model_validate(
                {"n": 1, "c": [1.0], "observations": [[0.0]], "m1": 1, "mi": 2}
            )

    def test_combined_loss(self):
        """Combined losses nest single losses by kind."""
        problem = ProblemFile.model_validate({
            "n": 1, "c": [1.0], "observations": [[0.0]], "m1": 1,
            "loss": {"kind": "combined", "losses": [{"kind": "fairness"}, {"kind": "adjacency"}]},
        })
        assert isinstance(problem.loss, CombinedLoss)
        assert [loss.kind for loss in problem.loss.losses] == ["fairness", "adjacency"]

    def test_robust_radius_moves_x0(self, cases_dir):
        """A robust radius replaces x0 by its worst case in the box."""
        problem = ProblemFile.load(cases_dir / "case_ii.json")
        robust = problem.model_copy(update={"robust_radius": 0.5}).to_instance()
        assert robust.x0.tolist() == pytest.approx([0.5, 0.5])


class TestRegionFile:
    """Tests for RegionFile serialization."""

    def test_round_trip(self, case_i, tmp_path):
        """Dumping and loading keeps rows, tags and verification."""
        region = impute(case_i, AdjacencyLoss())
        path = tmp_path / "region.json"
        RegionFile.from_region(region).dump(path)
        restored = RegionFile.load(path).to_region()
        assert restored.A.tolist() == region.A.tolist()
        assert restored.b.tolist() == region.b.tolist()
        assert [r.sign for r in restored.imputed_rows] == [r.sign for r in region.imputed_rows]
        assert restored.verification == region.verification
        assert restored.known_set == region.known_set

    def test_length_mismatch(self, case_i, tmp_path):
        """A and b must agree in length."""
        region = impute(case_i, IndifferenceLoss())
        data = json.loads(RegionFile.from_region(region).model_dump_json())
        data["b"] = data["b"][:-1]
        with pytest.raises(ValidationError):
            RegionFile.model_validate(data)


class TestRender:
    """Tests for the SVG renderer."""

    def test_deterministic(self, case_i):
        """The same region renders to identical bytes."""
        region = impute(case_i, AdjacencyLoss())
        first = render_region_svg(region, case_i.observations)
        second = render_region_svg(region, case_i.observations)
        assert first == second

    def test_elements(self, case_i, tmp_path):
        """Observations, x0 and repeated imputed rows are drawn."""
        region = impute(case_i, AdjacencyLoss())
        path = tmp_path / "plot.svg"
        write_svg(path, region, case_i.observations)
        svg = path.read_text(encoding="utf-8")
        assert svg.count('class="x0"') == 1
        assert svg.count('class="obs"') == 4
        assert 'class="imputed"' in svg
        assert "(4×)" in svg
        assert 'class="region"' in svg

    def test_unbounded_region_is_hatched(self, case_i):
        """A region leaving the view is hatched."""
        region = impute(case_i, IndifferenceLoss())
        svg = render_region_svg(region, case_i.observations)
        assert 'class="hatch"' in svg

    def test_three_dimensions_rejected(self):
        """Only planar regions are drawn."""
        p = ProblemFile.model_validate(
            {"n": 3, "c": [1.0, 1.0, 1.0], "observations": [[0.0, 0.0, 0.0]], "m1": 1}
        ).to_instance()
        region = impute(p, IndifferenceLoss())
        with pytest.raises(ValueError):
            render_region_svg(region, p.observations)

    def test_clip_row(self):
        """A line crossing the viewport is clipped to its two boundary points."""
        ends = clip_row(ConstraintRow(a=[1.0, 0.0], b=0.5), (0.0, 1.0, 0.0, 2.0))
        assert ends is not None
        assert ends[0].tolist() == pytest.approx([0.5, 0.0])
        assert ends[1].tolist() == pytest.approx([0.5, 2.0])
        assert clip_row(ConstraintRow(a=[1.0, 0.0], b=5.0), (0.0, 1.0, 0.0, 2.0)) is None
