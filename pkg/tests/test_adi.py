from __future__ import annotations

import numpy as np
import numpy.testing as nptest
import pytest

from arrowhead.adi import (
    Basis,
    CoefficientField2D,
    adi_precompute,
    adi_solve,
    screened_poisson_plan,
    solve_screened_poisson_2d,
    sylvester_residual,
    weighted_norm,
)
from arrowhead.assembly import Mesh1D, Space1D, assemble_rhs_2d
from arrowhead.errors import IncompatibleStructure
from arrowhead.linalg import B3Arrowhead
from arrowhead.transforms import TransformPlan, analysis_2d, hatbubble_to_values

from conftest import kron_solve, random_spd_arrowhead

STRUCTURES = [(4, 3, 5, 1, 0, 1), (6, 4, 8, 2, 1, 1), (3, 2, 6, 2, 2, 0), (5, 5, 6, 1, 1, 2), (2, 3, 4, 2, 0, 0)]


def random_problem(rng, sx, sy):
    A = random_spd_arrowhead(rng, *sx)
    D = random_spd_arrowhead(rng, *sx)
    B = random_spd_arrowhead(rng, *sy).scaled(-1.0)
    C = random_spd_arrowhead(rng, *sy)
    F = rng.standard_normal((A.N, B.N))
    return A, B, C, D, F


def diagonal_arrowhead(values, m, n, p):
    return B3Arrowhead.from_dense(np.diag(values), m, n, p, 0, 0, 0, 0)


class TestAdiSolver:
    @pytest.mark.parametrize("eps", [1e-2, 1e-4, 1e-8])
    def test_error_contract(self, eps):
        rng = np.random.default_rng(11)
        for k in range(20):
            sx = STRUCTURES[k % len(STRUCTURES)]
            sy = STRUCTURES[(3 * k + 1) % len(STRUCTURES)]
            A, B, C, D, F = random_problem(rng, sx, sy)
            plan = adi_precompute(A, B, C, D, eps)
            U = adi_solve(plan, F)
            exact = kron_solve(A, B, C, D, F)
            ref = weighted_norm(exact, C, D)
            assert weighted_norm(U - exact, C, D) <= eps * ref * (1 + 1e-6), (k, sx, sy)

    def test_commuting_diagonal(self, rng):
        a, d = rng.uniform(1, 3, 11), rng.uniform(1, 2, 11)
        b, c = -rng.uniform(1, 5, 8), rng.uniform(0.5, 2, 8)
        A, D = diagonal_arrowhead(a, 3, 2, 4), diagonal_arrowhead(d, 3, 2, 4)
        B, C = diagonal_arrowhead(b, 2, 3, 2), diagonal_arrowhead(c, 2, 3, 2)
        F = rng.standard_normal((11, 8))
        U = adi_solve(adi_precompute(A, B, C, D, 1e-12), F)
        expected = F / (np.outer(a, c) - np.outer(d, b))
        nptest.assert_allclose(U, expected, rtol=1e-9)

    @pytest.mark.parametrize("m,n,p", [(0, 1, 1), (1, 1, 0)])
    def test_scalar_equation(self, m, n, p):
        def scalar(value):
            return B3Arrowhead.from_dense([[value]], m, n, p, 0, 0, 0, 0)

        plan = adi_precompute(scalar(2.0), scalar(-2.0), scalar(1.0), scalar(1.0), 1e-8)
        assert plan.J >= 1
        for j in range(plan.J):
            nptest.assert_allclose(plan.left[j].to_dense(), [[np.sqrt(2.0 - plan.shifts.q[j])]])
            nptest.assert_allclose(plan.right[j].to_dense(), [[np.sqrt(plan.shifts.p[j] + 2.0)]])
        U = adi_solve(plan, np.array([[4.0]]))
        nptest.assert_allclose(U, [[1.0]], rtol=1e-7)

    def test_zero_rhs(self, rng):
        A, B, C, D, _ = random_problem(rng, STRUCTURES[0], STRUCTURES[1])
        U = adi_solve(adi_precompute(A, B, C, D, 1e-6), np.zeros((A.N, B.N)))
        assert not U.any()

    def test_plan_reuse(self, rng):
        A, B, C, D, F1 = random_problem(rng, STRUCTURES[1], STRUCTURES[2])
        F2 = rng.standard_normal(F1.shape)
        plan = adi_precompute(A, B, C, D, 1e-10)
        for F in (F1, F2):
            U = adi_solve(plan, F)
            assert sylvester_residual(A, B, C, D, U, F) < 1e-6
        assert plan.shape == F1.shape
        assert len(plan.left) == len(plan.right) == plan.J

    def test_shape_checks(self, rng):
        A, B, C, D, F = random_problem(rng, STRUCTURES[0], STRUCTURES[1])
        plan = adi_precompute(A, B, C, D, 1e-4)
        with pytest.raises(IncompatibleStructure):
            adi_solve(plan, F.T)
        with pytest.raises(IncompatibleStructure):
            adi_precompute(A, B, C, C, 1e-4)

    def test_residual_check_flag(self, rng, caplog):
        A, B, C, D, F = random_problem(rng, STRUCTURES[0], STRUCTURES[0])
        plan = adi_precompute(A, B, C, D, 1e-8)
        with caplog.at_level("INFO", logger="arrowhead.adi.solver"):
            adi_solve(plan, F, check_residual=True)
        assert "Sylvester residual" in caplog.text


class TestScreenedPoisson2D:
    def test_manufactured_sine(self):
        space = Space1D(Mesh1D.uniform(-1, 1, 2), 20)
        plan = TransformPlan.for_space(space)
        X, Y = np.meshgrid(plan.grid, plan.grid, indexing="ij")
        F = analysis_2d(plan, plan, 2 * np.pi ** 2 * np.sin(np.pi * X) * np.sin(np.pi * Y))
        field = solve_screened_poisson_2d(space, space, 0.0, F, 1e-10)
        assert field.basis_x is Basis.HAT_BUBBLE_Q
        x = np.linspace(-1, 1, 37)
        exact = np.outer(np.sin(np.pi * x), np.sin(np.pi * x))
        assert np.max(np.abs(field.evaluate(x, x) - exact)) < 1e-9

    def test_zero_rhs(self):
        space = Space1D(Mesh1D.uniform(-1, 1, 3), 6)
        field = solve_screened_poisson_2d(space, space, 1.0, np.zeros((space.legendre_dim,) * 2), 1e-8)
        assert not field.values.any()

    def test_single_element(self):
        space = Space1D(Mesh1D.uniform(-1, 1, 1), 10)
        eps = 1e-10
        plan, ox, _ = screened_poisson_plan(space, space, 0.0, eps)
        assert ox.mass.m == 0
        F = np.zeros((space.legendre_dim, space.legendre_dim))
        F[0, 0] = 1.0
        G = assemble_rhs_2d(space, space, F)
        U = adi_solve(plan, G)
        exact = kron_solve(plan.A, plan.B, plan.C, plan.D, G)
        ref = weighted_norm(exact, plan.C, plan.D)
        assert weighted_norm(U - exact, plan.C, plan.D) <= eps * ref * (1 + 1e-6)
        assert sylvester_residual(plan.A, plan.B, plan.C, plan.D, exact, G) <= 1e-8
        field = solve_screened_poisson_2d(space, space, 0.0, F, eps, plan=plan)
        nptest.assert_allclose(field.values, U)

    @pytest.mark.parametrize("bc,omega", [("dirichlet", 0.0), ("full", 2.0), ("dirichlet-neumann", 1.0)])
    def test_against_dense_solve(self, bc, omega):
        sx = Space1D(Mesh1D.uniform(-1, 1, 3), 5, bc)
        sy = Space1D(Mesh1D.from_sequence([0, 0.3, 1.0]), 4, bc)
        px, py = TransformPlan.for_space(sx), TransformPlan.for_space(sy)
        X, Y = np.meshgrid(px.grid, py.grid, indexing="ij")
        indicator = ((np.abs(X) <= 1 / 3) & (Y <= 0.3)).astype(float)
        F = analysis_2d(px, py, indicator)
        eps = 1e-10
        plan, ox, oy = screened_poisson_plan(sx, sy, omega, eps)
        G = assemble_rhs_2d(sx, sy, F)
        U = adi_solve(plan, G)
        exact = kron_solve(plan.A, plan.B, plan.C, plan.D, G)
        ref = weighted_norm(exact, plan.C, plan.D)
        assert weighted_norm(U - exact, plan.C, plan.D) <= eps * ref * (1 + 1e-6)

    def test_field_conversion(self, rng):
        sx = Space1D(Mesh1D.uniform(-1, 1, 2), 4)
        sy = Space1D(Mesh1D.uniform(0, 1, 3), 3, "full")
        U = rng.standard_normal((sx.dim, sy.dim))
        field = CoefficientField2D(U, Basis.hat_bubble(sx), Basis.hat_bubble(sy), sx, sy)
        assert field.basis_y is Basis.HAT_BUBBLE_C
        px, py = TransformPlan.for_space(sx), TransformPlan.for_space(sy)
        nptest.assert_allclose(field.evaluate(px.grid, py.grid), hatbubble_to_values(px, py, U, sx, sy), atol=1e-12)
        leg = field.to_legendre()
        assert leg.values.shape == (sx.legendre_dim, sy.legendre_dim)
        with pytest.raises(ValueError):
            leg.evaluate(px.grid, py.grid)
        with pytest.raises(IncompatibleStructure):
            CoefficientField2D(U.T, Basis.HAT_BUBBLE_Q, Basis.HAT_BUBBLE_C, sx, sy)
