"""Tests for row normalization, validity checks and planar vertices."""

import pytest

from feasregion.contracts.errors import (
    DimensionMismatchError,
    EmptyRegionError,
    NormalizationDegenerateError,
    UnboundedRegionError,
    ZeroCostVectorError,
)
from feasregion.contracts.geometry import (
    ConstraintRow,
    NormalizationScheme,
    ObservationSet,
    Polyhedron,
)
from feasregion.geometry import (
    half_space_of_cost,
    is_bounded,
    is_empty,
    is_valid_set,
    normalize_row,
    preferred_observation,
    region_vertices_2d,
    row_is_normalized,
    slack_distance,
)


class TestNormalization:
    """Tests for normalize_row."""

    def test_sum_proxy_positive(self):
        """A row with positive coefficient sum is scaled to sum one."""
        row = normalize_row(ConstraintRow(a=[2.0, 6.0], b=4.0))
        assert row.a == pytest.approx([0.25, 0.75])
        assert row.b == pytest.approx(0.5)
        assert row.sign == 1
        assert row.normalization == NormalizationScheme.sum_proxy

    def test_sum_proxy_negative(self):
        """A negative coefficient sum keeps its direction and becomes -1."""
        row = normalize_row(ConstraintRow(a=[-1.0, -3.0], b=-8.0))
        assert row.a == pytest.approx([-0.25, -0.75])
        assert row.b == pytest.approx(-2.0)
        assert row.sign == -1

    def test_sum_proxy_degenerate(self):
        """Coefficients summing to zero cannot be sum-normalized."""
        with pytest.raises(NormalizationDegenerateError):
            normalize_row(ConstraintRow(a=[1.0, -1.0], b=0.0))

    def test_l1_exact(self):
        """l1-exact accepts rows whose coefficients cancel."""
        row = normalize_row(ConstraintRow(a=[1.0, -1.0], b=0.5), NormalizationScheme.l1_exact)
        assert row.a == pytest.approx([0.5, -0.5])
        assert row.b == pytest.approx(0.25)
        assert row_is_normalized(row, NormalizationScheme.l1_exact)

    def test_scaling_preserves_half_space(self):
        """Normalization only rescales by a positive factor."""
        original = ConstraintRow(a=[-3.0, 1.0], b=2.0)
        row = normalize_row(original)
        for point in ([0.0, 5.0], [-1.0, 0.0], [1.0, 1.0]):
            assert (slack_distance(original, point) >= 0) == (slack_distance(row, point) >= 0)

    def test_normalized_row_rejects_bad_sum(self):
        """Tagging a row as sum-proxy validates its coefficient sum."""
        with pytest.raises(ValueError):
            ConstraintRow(a=[0.3, 0.3], b=0.0, normalization=NormalizationScheme.sum_proxy)

    @pytest.mark.parametrize(
        "scheme", [NormalizationScheme.sum_proxy, NormalizationScheme.l1_exact]
    )
    def test_idempotent(self, scheme):
        """Normalizing a normalized row leaves it unchanged."""
        once = normalize_row(ConstraintRow(a=[-3.0, 1.0, 0.5], b=2.0), scheme)
        twice = normalize_row(once, scheme)
        assert twice.a == pytest.approx(once.a, abs=1e-12)
        assert twice.b == pytest.approx(once.b, abs=1e-12)
        assert twice.sign == once.sign


class TestCostHalfSpace:
    """Tests for the normalized cost half-space."""

    def test_case_i_cost_row(self):
        """c = (-1, -1) at x0 = (2, 2) gives 0.5 x1 + 0.5 x2 <= 2."""
        row = half_space_of_cost([-1.0, -1.0], [2.0, 2.0])
        assert row.a == pytest.approx([-0.5, -0.5])
        assert row.b == pytest.approx(-2.0)

    def test_zero_cost(self):
        """The zero cost vector is rejected."""
        with pytest.raises(ZeroCostVectorError):
            half_space_of_cost([0.0, 0.0], [1.0, 1.0])

    def test_dimension_mismatch(self):
        """c and x0 must agree in length."""
        with pytest.raises(DimensionMismatchError):
            half_space_of_cost([1.0, 1.0], [1.0, 1.0, 1.0])

    def test_preferred_observation_ties(self):
        """Ties in c'x go to the lowest index."""
        assert preferred_observation([[1.0, 2.0], [2.0, 1.0], [3.0, 3.0]], [1.0, 1.0]) == 0
        assert preferred_observation([[3.0, 3.0], [2.0, 1.0]], [1.0, 1.0]) == 1

    @pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e4])
    def test_preferred_observation_scale_invariant(self, scale):
        """Scaling c by a positive factor keeps the preferred index."""
        points = [[1.0, 4.0], [2.5, 0.5], [0.0, 3.0], [2.0, 1.0]]
        c = [1.0, 2.0]
        expected = preferred_observation(points, c)
        assert preferred_observation(points, [scale * v for v in c]) == expected


class TestValidity:
    """Tests for is_valid_set."""

    def test_all_valid(self, unit_square):
        """Observations inside the square are valid."""
        obs = ObservationSet(points=[[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]])
        valid, violations = is_valid_set(unit_square, obs)
        assert valid
        assert violations == []

    def test_reports_every_violation(self, unit_square):
        """Each failing (row, observation) pair is listed with its amount."""
        obs = ObservationSet(points=[[0.5, 0.5], [2.0, -1.0]])
        valid, violations = is_valid_set(unit_square, obs)
        assert not valid
        pairs = {(v.row, v.observation): v.amount for v in violations}
        assert pairs == {(1, 1): pytest.approx(1.0), (2, 1): pytest.approx(1.0)}

    def test_tolerance(self, unit_square):
        """Violations within the feasibility tolerance are ignored."""
        obs = ObservationSet(points=[[1.0 + 1e-9, 0.5]])
        assert is_valid_set(unit_square, obs)[0]


class TestPlanarRegions:
    """Tests for vertices, emptiness and boundedness."""

    def test_square_vertices(self, unit_square):
        """The unit square has its four corners counter-clockwise."""
        vertices = region_vertices_2d(unit_square)
        rounded = sorted((round(x, 6) + 0.0, round(y, 6) + 0.0) for x, y in vertices)
        assert rounded == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]
        cross = 0.0
        for (x1, y1), (x2, y2) in zip(vertices, vertices[1:] + vertices[:1]):
            cross += x1 * y2 - x2 * y1
        assert cross > 0

    def test_redundant_rows(self, unit_square):
        """A redundant row through a corner adds no vertex."""
        region = unit_square.extended([ConstraintRow(a=[1.0, 1.0], b=0.0)])
        assert len(region_vertices_2d(region)) == 4

    def test_empty(self, unit_square):
        """Contradictory rows raise EmptyRegionError."""
        region = unit_square.extended([ConstraintRow(a=[1.0, 0.0], b=2.0)])
        assert is_empty(region)
        with pytest.raises(EmptyRegionError):
            region_vertices_2d(region)

    def test_unbounded(self):
        """A quadrant is unbounded unless clipped by a viewport."""
        quadrant = Polyhedron.from_matrix([[1, 0], [0, 1]], [0, 0])
        assert not is_bounded(quadrant)
        with pytest.raises(UnboundedRegionError):
            region_vertices_2d(quadrant)
        clipped = region_vertices_2d(quadrant, viewport=(-1.0, 2.0, -1.0, 3.0))
        assert len(clipped) == 4

    def test_requires_two_dimensions(self):
        """Vertex extraction is planar only."""
        cube = Polyhedron.from_matrix([[1, 0, 0]], [0])
        with pytest.raises(DimensionMismatchError):
            region_vertices_2d(cube)

    def test_matrix_form_input(self):
        """Polyhedra accept the compact A/b form."""
        poly = Polyhedron.model_validate({"A": [[1, 0], [0, 1]], "b": [1, 2]})
        assert poly.n == 2
        assert poly.b.tolist() == [1.0, 2.0]
