from __future__ import annotations

import dataclasses

import numpy as np
import numpy.testing as nptest
import pytest
from scipy.integrate import solve_ivp

from arrowhead.adi import weighted_norm
from arrowhead.assembly import Mesh1D, Space1D, assemble_rhs_2d, conversion_matrix, derivative_matrix
from arrowhead.errors import ArrowheadError
from arrowhead.frontends import (
    BurgersState,
    boundary_values,
    bump_initial,
    burgers_step,
    heat_half_step,
    indicator_initial,
    run_burgers,
)
from arrowhead.transforms import analysis_2d, synthesis_2d

from conftest import kron_solve


def square(n, p, bc="dirichlet"):
    return Space1D(Mesh1D.uniform(-1, 1, n), p, bc)


def bump_dx(X, Y, width=10.0):
    g = np.exp(-width * (X ** 2 + Y ** 2)) * (1 - Y ** 2)
    return g * (-2 * width * X * (1 - X ** 2) - 2 * X)


def quartic_initial(X, Y):
    """Vanishes on the boundary together with its Laplacian."""
    return (1 - X ** 2) * (5 - X ** 2) * (1 - Y ** 2) * (5 - Y ** 2) / 25.0


def projected(space, coeffs):
    """Dirichlet-space coefficients of the L2 projection of piecewise-Legendre ``coeffs``."""
    M = space.operators().mass.to_dense()
    G = assemble_rhs_2d(space, space, coeffs)
    return np.linalg.solve(M, np.linalg.solve(M, G.T).T)


def semi_discrete_rhs(state):
    """Right-hand side of the Galerkin system the stepper discretises in time, on dense matrices."""
    space, plan = state.space_x, state.plan_x
    ops = space.operators()
    M, K = ops.mass.to_dense(), ops.laplacian.to_dense()
    R, D = conversion_matrix(space).toarray(), derivative_matrix(space).toarray()

    def rhs(t, y):
        U = y.reshape(M.shape)
        V = synthesis_2d(plan, plan, R @ U @ R.T)
        Vx = synthesis_2d(plan, plan, D @ U @ R.T)
        G = -state.viscosity * (K @ U @ M + M @ U @ K)
        G = G + assemble_rhs_2d(space, space, analysis_2d(plan, plan, -V * Vx))
        return np.linalg.solve(M, np.linalg.solve(M, G.T).T).ravel()

    return rhs


class TestBurgers:
    def test_zero_is_fixed_point(self):
        space = square(3, 6)
        state = BurgersState.initial(space, space, lambda X, Y: np.zeros_like(X))
        state = run_burgers(state, 3)
        assert state.step == 3
        assert np.max(np.abs(state.values())) <= 1e-14

    def test_state_is_immutable(self):
        space = square(2, 5)
        state = BurgersState.initial(space, space, bump_initial())
        nxt = burgers_step(state)
        assert state.step == 0 and state.half_step is None
        assert nxt.step == 1 and nxt.adi is state.adi

    def test_grid_values_match_sampler(self):
        space = square(2, 5)
        a = BurgersState.initial(space, space, bump_initial())
        X, Y = np.meshgrid(a.plan_x.grid, a.plan_y.grid, indexing="ij")
        b = BurgersState.initial(space, space, bump_initial()(X, Y))
        nptest.assert_allclose(a.coeffs, b.coeffs)
        nptest.assert_allclose(a.values(), bump_initial()(X, Y), atol=1e-13)

    def test_boundary_stays_zero(self):
        space = square(9, 12)
        state = BurgersState.initial(space, space, indicator_initial(), viscosity=0.1, dt=1e-3)
        for _ in range(50):
            state = burgers_step(state)
            assert np.max(np.abs(boundary_values(state))) <= 1e-10
        assert np.all(np.isfinite(state.values()))

    def test_boundary_values_read_the_state(self):
        space = square(2, 4)
        state = BurgersState.initial(space, space, lambda X, Y: np.ones_like(X))
        values = boundary_values(state)
        assert values.shape == (4 * 5 * 2,)
        nptest.assert_allclose(values, 1.0, atol=1e-13)

    def test_linear_step_is_heat_solve(self):
        space = square(2, 6)
        state = BurgersState.initial(space, space, bump_initial(), viscosity=0.1, dt=1e-2)
        nxt = burgers_step(state, nonlinear=False)
        U = nxt.half_step
        R = conversion_matrix(space).toarray()
        nptest.assert_allclose(nxt.coeffs, R @ U @ R.T, atol=1e-12)

        plan = state.adi
        G = assemble_rhs_2d(space, space, state.coeffs) / (state.dt * state.viscosity)
        exact = kron_solve(plan.A, plan.B, plan.C, plan.D, G)
        assert weighted_norm(U - exact, plan.C, plan.D) <= 1e-9 * weighted_norm(exact, plan.C, plan.D)
        nptest.assert_allclose(heat_half_step(state), U)

    def test_advection_term(self):
        space = square(4, 16)
        dt = 1e-4
        state = BurgersState.initial(space, space, bump_initial(), viscosity=0.1, dt=dt)
        linear = burgers_step(state, nonlinear=False).values()
        full = burgers_step(state).values()
        X, Y = np.meshgrid(state.plan_x.grid, state.plan_y.grid, indexing="ij")
        expected = -dt * bump_initial()(X, Y) * bump_dx(X, Y)
        scale = dt * np.max(np.abs(bump_initial()(X, Y) * bump_dx(X, Y)))
        assert np.max(np.abs((full - linear) - expected)) <= 1e-2 * scale

    def test_small_step_changes_little(self):
        space = square(4, 16)
        state = BurgersState.initial(space, space, bump_initial(), dt=1e-7)
        nxt = burgers_step(state)
        assert np.max(np.abs(nxt.values() - state.values())) < 1e-4

    def test_local_error_is_second_order(self):
        space = square(1, 16)
        errors = []
        for dt in (1e-4, 5e-5):
            state = BurgersState.initial(space, space, quartic_initial, viscosity=0.1, dt=dt, eps=1e-13)
            start = projected(space, state.coeffs)
            reference = solve_ivp(
                semi_discrete_rhs(state), (0.0, dt), start.ravel(), method="DOP853", rtol=1e-13, atol=1e-15
            )
            assert reference.success
            stepped = projected(space, burgers_step(state).coeffs)
            errors.append(np.linalg.norm(stepped - reference.y[:, -1].reshape(start.shape)))
        assert errors[1] > 0
        assert 3.5 <= errors[0] / errors[1] <= 4.5

    def test_non_finite_state(self):
        space = square(2, 4)
        state = BurgersState.initial(space, space, bump_initial())
        broken = dataclasses.replace(state, coeffs=np.full_like(state.coeffs, np.nan))
        with pytest.raises(ArrowheadError):
            burgers_step(broken)

    def test_invalid_setup(self):
        space = square(2, 4)
        with pytest.raises(ValueError):
            BurgersState.initial(space, space, bump_initial(), dt=0.0)
        with pytest.raises(ValueError):
            BurgersState.initial(space, square(2, 4, "full"), bump_initial())

    def test_indicator_alignment(self):
        sample = indicator_initial()
        x = np.array([-0.5, -0.2, 0.0, 0.2, 0.5])
        X, Y = np.meshgrid(x, x, indexing="ij")
        vals = sample(X, Y)
        assert vals[2, 2] == 1.0 and vals[0, 2] == 0.0 and vals[1, 3] == 1.0
