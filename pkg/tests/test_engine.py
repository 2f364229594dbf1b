"""Tests for the dense LP, MILP and QP solvers."""

import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from feasregion.contracts.errors import SizeGuardError
from feasregion.contracts.solver import Relation, SolveStatus
from feasregion.engine import ModelBuilder, dot, solve, solve_lp, solve_milp, solve_qp_activeset

SCIPY_STATUS = {0: SolveStatus.optimal, 2: SolveStatus.infeasible, 3: SolveStatus.unbounded}


def _lp_model(c, A, b, bounds):
    builder = ModelBuilder("lp")
    x = [builder.add_var(f"x[{j}]", lower=lo, upper=hi) for j, (lo, hi) in enumerate(bounds)]
    for i, row in enumerate(A):
        builder.add_constraint(dot(row, x), Relation.ge, b[i])
    builder.set_objective(dot(c, x))
    return builder.build()


def _scipy_bounds(bounds):
    return [(None if math.isinf(lo) else lo, None if math.isinf(hi) else hi) for lo, hi in bounds]


class TestLinearPrograms:
    """Tests for the two-phase simplex."""

    def test_small_lp(self):
        """min x + y over x + 2y >= 2, 2x + y >= 2, x, y >= 0 is 4/3."""
        model = _lp_model([1, 1], [[1, 2], [2, 1]], [2, 2], [(0, math.inf)] * 2)
        result = solve_lp(model)
        assert result.is_optimal
        assert result.objective_value == pytest.approx(4 / 3)
        assert result.solution == pytest.approx([2 / 3, 2 / 3])

    def test_infeasible(self):
        """x >= 1 and -x >= 0 cannot both hold."""
        model = _lp_model([1], [[1], [-1]], [1, 0], [(-math.inf, math.inf)])
        assert solve_lp(model).status == SolveStatus.infeasible

    def test_unbounded(self):
        """min -x over x >= 0 is unbounded."""
        model = _lp_model([-1], [[1]], [0], [(-math.inf, math.inf)])
        assert solve_lp(model).status == SolveStatus.unbounded

    def test_equality_rows(self):
        """Equality rows are honoured."""
        builder = ModelBuilder()
        x = builder.add_vars("x", 2, lower=0.0)
        builder.add_constraint(x[0] + x[1], Relation.eq, 3.0)
        builder.add_constraint(x[0], Relation.le, 1.0)
        builder.set_objective(x[0] * -1.0 + x[1] * 2.0)
        result = solve_lp(builder.build())
        assert result.is_optimal
        assert result.solution == pytest.approx([1.0, 2.0])
        assert result.objective_value == pytest.approx(3.0)

    def test_objective_constant(self):
        """The expression constant of the objective is included in the value."""
        builder = ModelBuilder()
        x = builder.add_var("x", lower=1.0, upper=2.0)
        builder.set_objective(x + 5.0)
        result = solve_lp(builder.build())
        assert result.objective_value == pytest.approx(6.0)

    def test_rejects_binary_model(self):
        """Binary variables are routed to the MILP solver."""
        builder = ModelBuilder()
        z = builder.add_var("z", binary=True)
        builder.set_objective(z)
        with pytest.raises(ValueError):
            solve_lp(builder.build())

    def test_pivot_limit(self):
        """A zero pivot budget reports an iteration limit on a nontrivial LP."""
        model = _lp_model([1, 1], [[1, 2], [2, 1]], [2, 2], [(0, math.inf)] * 2)
        assert solve_lp(model, pivot_limit=0).status == SolveStatus.iteration_limit

    def test_degenerate_lp(self):
        """Many rows through the same vertex do not cycle."""
        A = [[1, 0], [0, 1], [1, 1], [2, 1], [1, 2], [3, 1], [1, 3]]
        b = [0, 0, 0, 0, 0, 0, 0]
        model = _lp_model([1, 1], A, b, [(-math.inf, math.inf)] * 2)
        result = solve_lp(model)
        assert result.is_optimal
        assert result.objective_value == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_scipy(self, seed):
        """Status and optimal value agree with HiGHS on random LPs."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, 8))
        A = rng.normal(size=(m, n)).round(2)
        b = rng.normal(size=m).round(2)
        c = rng.normal(size=n).round(2)
        bounds = []
        for _ in range(n):
            kind = rng.integers(0, 3)
            if kind == 0:
                bounds.append((-math.inf, math.inf))
            elif kind == 1:
                bounds.append((0.0, math.inf))
            else:
                bounds.append((-2.0, 3.0))

        ours = solve_lp(_lp_model(c, A, b, bounds))
        ref = linprog(c, A_ub=-A, b_ub=-b, bounds=_scipy_bounds(bounds), method="highs")

        assert ours.status == SCIPY_STATUS[ref.status]
        if ref.status == 0:
            assert ours.objective_value == pytest.approx(ref.fun, abs=1e-6 * max(1.0, abs(ref.fun)))
            x = np.asarray(ours.solution)
            assert np.all(A @ x - b >= -1e-7)


class TestDuals:
    """Tests for the row duals of optimal LPs."""

    @pytest.mark.parametrize("seed", range(10))
    def test_strong_duality(self, seed):
        """For free variables, A'y = c, y >= 0 and b'y = c'x*."""
        rng = np.random.default_rng(100 + seed)
        n = 3
        # bounded feasible region: a box written as rows plus random cuts through it
        A = np.vstack([np.eye(n), -np.eye(n), rng.normal(size=(3, n))])
        b = np.concatenate([-np.ones(n), -np.ones(n), -np.abs(rng.normal(size=3)) - 2.0])
        c = rng.normal(size=n)

        result = solve_lp(_lp_model(c, A, b, [(-math.inf, math.inf)] * n))
        assert result.is_optimal
        y = np.asarray(result.duals)
        assert len(y) == len(b)
        assert np.all(y >= -1e-9)
        assert A.T @ y == pytest.approx(c, abs=1e-7)
        assert b @ y == pytest.approx(result.objective_value, abs=1e-7)

    def test_le_row_duals_nonpositive(self):
        """A binding <= row carries a nonpositive dual."""
        builder = ModelBuilder()
        x = builder.add_var("x")
        builder.add_constraint(x, Relation.le, 2.0)
        builder.set_objective(x * -1.0)
        result = solve_lp(builder.build())
        assert result.objective_value == pytest.approx(-2.0)
        assert result.duals[0] == pytest.approx(-1.0)


class TestMixedInteger:
    """Tests for branch-and-bound."""

    def test_knapsack(self):
        """A tiny knapsack picks the best subset."""
        values = [6, 5, 4]
        weights = [3, 2, 2]
        builder = ModelBuilder()
        z = builder.add_vars("z", 3, binary=True)
        builder.add_constraint(dot(weights, z), Relation.le, 4.0)
        builder.set_objective(dot([-v for v in values], z))
        result = solve_milp(builder.build())
        assert result.is_optimal
        assert result.objective_value == pytest.approx(-9.0)
        assert result.solution == pytest.approx([0.0, 1.0, 1.0])

    def test_infeasible_milp(self):
        """No binary assignment satisfies z0 + z1 >= 3."""
        builder = ModelBuilder()
        z = builder.add_vars("z", 2, binary=True)
        builder.add_constraint(z[0] + z[1], Relation.ge, 3.0)
        builder.set_objective(z[0])
        assert solve_milp(builder.build()).status == SolveStatus.infeasible

    def test_rejects_pure_lp(self):
        """A model without binaries is an LP."""
        builder = ModelBuilder()
        x = builder.add_var("x", lower=0.0)
        builder.set_objective(x)
        with pytest.raises(ValueError):
            solve_milp(builder.build())

    def test_initial_solution_accepted(self):
        """A feasible start does not change the optimum."""
        builder = ModelBuilder()
        z = builder.add_vars("z", 2, binary=True)
        x = builder.add_var("x", lower=0.0, upper=5.0)
        builder.add_constraint(x - z[0] * 5.0, Relation.le, 0.0)
        builder.add_constraint(z[0] + z[1], Relation.ge, 1.0)
        builder.set_objective(z[0] + z[1] * 2.0 - x * 0.5)
        model = builder.build()
        plain = solve_milp(model)
        started = solve_milp(model, initial_solution=[0.0, 1.0, 0.0])
        assert plain.objective_value == pytest.approx(-1.5)
        assert started.objective_value == pytest.approx(plain.objective_value)

    def test_bad_initial_solution_is_ignored(self):
        """An infeasible start is discarded rather than trusted."""
        builder = ModelBuilder()
        z = builder.add_vars("z", 2, binary=True)
        builder.add_constraint(z[0] + z[1], Relation.ge, 1.0)
        builder.set_objective(z[0] + z[1])
        result = solve_milp(builder.build(), initial_solution=[0.0, 0.0])
        assert result.objective_value == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_enumeration(self, seed):
        """Optimal value equals the best LP over every binary assignment."""
        rng = np.random.default_rng(200 + seed)
        nz, nx = 3, 2
        Az = rng.normal(size=(3, nz)).round(2)
        Ax = rng.normal(size=(3, nx)).round(2)
        rhs = rng.normal(size=3).round(2) - 1.0
        cz = rng.normal(size=nz).round(2)
        cx = rng.normal(size=nx).round(2)

        builder = ModelBuilder()
        z = builder.add_vars("z", nz, binary=True)
        x = builder.add_vars("x", nx, lower=-2.0, upper=2.0)
        for i in range(3):
            builder.add_constraint(dot(Az[i], z) + dot(Ax[i], x), Relation.ge, rhs[i])
        builder.set_objective(dot(cz, z) + dot(cx, x))
        result = solve_milp(builder.build())

        best = math.inf
        for assignment in itertools.product([0.0, 1.0], repeat=nz):
            fixed = np.asarray(assignment)
            ref = linprog(
                cx,
                A_ub=-Ax,
                b_ub=-(rhs - Az @ fixed),
                bounds=[(-2.0, 2.0)] * nx,
                method="highs",
            )
            if ref.status == 0:
                best = min(best, ref.fun + cz @ fixed)

        if math.isinf(best):
            assert result.status == SolveStatus.infeasible
        else:
            assert result.is_optimal
            assert result.objective_value == pytest.approx(best, abs=1e-6)
            assert all(min(v, 1 - v) < 1e-6 for v in result.solution[:nz])


class TestQuadratic:
    """Tests for the active-set QP."""

    def test_bound_active(self):
        """min (x - 2)^2 subject to x <= 1 sits on the bound."""
        builder = ModelBuilder()
        x = builder.add_var("x")
        builder.add_constraint(x, Relation.le, 1.0)
        builder.set_objective(x * -4.0 + 4.0, quadratic={0: 1.0})
        result = solve_qp_activeset(builder.build())
        assert result.is_optimal
        assert result.solution == pytest.approx([1.0])
        assert result.objective_value == pytest.approx(1.0)

    def test_interior_minimum(self):
        """An unconstrained minimiser inside the region is returned."""
        builder = ModelBuilder()
        x = builder.add_vars("x", 2, lower=-5.0, upper=5.0)
        builder.set_objective(x[0] * -2.0 + x[1] * 4.0, quadratic={0: 1.0, 1: 1.0})
        result = solve(builder.build())
        assert result.solution == pytest.approx([1.0, -2.0])
        assert result.objective_value == pytest.approx(-5.0)

    def test_infeasible_qp(self):
        """Contradictory rows give an infeasible status."""
        builder = ModelBuilder()
        x = builder.add_var("x")
        builder.add_constraint(x, Relation.ge, 1.0)
        builder.add_constraint(x, Relation.le, 0.0)
        builder.set_objective(x * 0.0, quadratic={0: 1.0})
        assert solve_qp_activeset(builder.build()).status == SolveStatus.infeasible

    def test_size_guard(self, monkeypatch):
        """Too many inequality rows raise SizeGuardError."""
        monkeypatch.setenv("FEASREGION_QP_MAX_ROWS", "3")
        builder = ModelBuilder()
        x = builder.add_vars("x", 2)
        for i in range(4):
            builder.add_constraint(x[0] + x[1] * float(i), Relation.ge, -10.0)
        builder.set_objective(x[0] * 0.0, quadratic={0: 1.0, 1: 1.0})
        with pytest.raises(SizeGuardError):
            solve_qp_activeset(builder.build())

    @pytest.mark.parametrize("seed", range(5))
    def test_not_beaten_by_grid(self, seed):
        """No feasible grid point has a lower objective than the returned point."""
        rng = np.random.default_rng(300 + seed)
        q = rng.uniform(0.5, 2.0, size=2)
        lin = rng.normal(size=2) * 3.0
        cut = rng.normal(size=2)
        cut_rhs = -0.5

        builder = ModelBuilder()
        x = builder.add_vars("x", 2, lower=-1.0, upper=1.0)
        builder.add_constraint(dot(cut, x), Relation.ge, cut_rhs)
        builder.set_objective(dot(lin, x), quadratic={0: q[0], 1: q[1]})
        result = solve_qp_activeset(builder.build())
        assert result.is_optimal

        point = np.asarray(result.solution)
        assert np.all(np.abs(point) <= 1.0 + 1e-9)
        assert cut @ point >= cut_rhs - 1e-9

        grid = np.linspace(-1.0, 1.0, 41)
        for g0, g1 in itertools.product(grid, grid):
            y = np.array([g0, g1])
            if cut @ y >= cut_rhs:
                assert result.objective_value <= q @ y**2 + lin @ y + 1e-9


class TestModelBuilder:
    """Tests for expression arithmetic and model assembly."""

    def test_constant_moves_to_rhs(self):
        """``x + 3 >= 5`` becomes ``x >= 2``."""
        builder = ModelBuilder()
        x = builder.add_var("x")
        builder.add_constraint(x + 3.0, Relation.ge, 5.0)
        builder.set_objective(x)
        model = builder.build()
        assert model.rows[0].rhs == pytest.approx(2.0)
        assert model.rows[0].coefficients == [1.0]

    def test_binary_bounds_clamped(self):
        """Binary variables live in [0, 1]."""
        builder = ModelBuilder()
        builder.add_var("z", lower=-3.0, upper=7.0, binary=True)
        builder.set_objective(builder.add_var("x") * 0.0)
        model = builder.build()
        assert model.var_bounds[0] == (0.0, 1.0)
        assert model.integrality == [True, False]

    def test_expression_value(self):
        """``value`` evaluates terms plus the constant."""
        builder = ModelBuilder()
        x = builder.add_vars("x", 2)
        expr = dot([2.0, -1.0], x) + 1.5
        assert expr.value([1.0, 4.0]) == pytest.approx(-0.5)

    def test_copy_is_independent(self):
        """Rows added to a copy do not leak into the original."""
        builder = ModelBuilder()
        x = builder.add_var("x")
        clone = builder.copy()
        clone.add_constraint(x, Relation.ge, 1.0)
        assert len(builder.rows) == 0
        assert len(clone.rows) == 1
