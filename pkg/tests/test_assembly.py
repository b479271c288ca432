from __future__ import annotations

import math

import numpy as np
import numpy.testing as nptest
import pytest

from arrowhead.assembly import (
    BoundaryCondition,
    Mesh1D,
    Space1D,
    assemble_operators,
    assemble_rhs_1d,
    assemble_rhs_2d,
    conversion_matrix,
    deinterlace,
    derivative_matrix,
    evaluate_basis,
    interlace,
    legendre_weights,
    solve_screened_poisson_1d,
)
from arrowhead.basis import bubble_eval, legendre_eval, legendre_vander
from arrowhead.errors import IncompatibleStructure
from arrowhead.transforms import TransformPlan, analysis_1d

BCS = list(BoundaryCondition)


def element_basis(space: Space1D, e: int, t: np.ndarray):
    """Values and x-derivatives of every basis function at reference points ``t`` of element ``e``."""
    delta = space.mesh.widths[e]
    vals = np.zeros((t.size, space.dim))
    ders = np.zeros((t.size, space.dim))
    nodes = list(space.hat_nodes)
    for node, v, d in ((e, (1 - t) / 2, -1 / delta), (e + 1, (1 + t) / 2, 1 / delta)):
        if node in nodes:
            vals[:, nodes.index(node)] = v
            ders[:, nodes.index(node)] = d
    for k in range(space.degree - 1):
        col = space.interlace_index(k + 1, e)
        vals[:, col] = bubble_eval(k, t)
        ders[:, col] = -legendre_eval(k + 1, t) * 2 / delta
    return vals, ders


def quadrature_operators(space: Space1D):
    t, w = np.polynomial.legendre.leggauss(space.degree + 3)
    N = space.dim
    M, L = np.zeros((N, N)), np.zeros((N, N))
    for e in range(space.n):
        V, D = element_basis(space, e, t)
        scale = w * space.mesh.widths[e] / 2
        M += V.T @ (scale[:, None] * V)
        L += D.T @ (scale[:, None] * D)
    return M, L


class TestMesh:
    def test_uniform(self):
        mesh = Mesh1D.uniform(-1, 1, 4)
        assert mesh.n == 4
        nptest.assert_allclose(mesh.widths, 0.5)
        assert (mesh.a, mesh.b, mesh.length, mesh.h) == (-1.0, 1.0, 2.0, 0.5)

    @pytest.mark.parametrize("points", [[0.0], [0.0, 0.0, 1.0], [1.0, 0.0], [0.0, np.inf]])
    def test_invalid_breakpoints(self, points):
        with pytest.raises(ValueError):
            Mesh1D.from_sequence(points)

    def test_locate_and_element_points(self):
        mesh = Mesh1D.from_sequence([0.0, 1.0, 3.0])
        e, t = mesh.locate([0.0, 0.5, 1.0, 2.0, 3.0])
        nptest.assert_array_equal(e, [0, 0, 1, 1, 1])
        nptest.assert_allclose(t, [-1.0, 0.0, -1.0, 0.0, 1.0])
        nptest.assert_allclose(mesh.element_points([-1.0, 1.0]), [[0.0, 1.0], [1.0, 3.0]])
        with pytest.raises(ValueError):
            mesh.locate([3.5])


class TestSpace:
    def test_neumann_alias(self):
        assert BoundaryCondition("neumann") is BoundaryCondition.FULL
        assert BoundaryCondition("Dirichlet") is BoundaryCondition.DIRICHLET

    @pytest.mark.parametrize("bc,hats", [("dirichlet", 2), ("full", 4), ("neumann-dirichlet", 3), ("dirichlet-neumann", 3)])
    def test_dimensions(self, bc, hats):
        space = Space1D(Mesh1D.uniform(-1, 1, 3), 4, bc)
        assert space.hat_count == hats
        assert space.dim == hats + 3 * 3
        assert space.legendre_dim == 15

    def test_degree_too_small(self):
        with pytest.raises(ValueError):
            Space1D(Mesh1D.uniform(0, 1, 2), 1)

    def test_from_description(self):
        space = Space1D.from_description({"breakpoints": [0, 0.5, 2], "degree": 3, "bc": "neumann"})
        assert space.bc is BoundaryCondition.FULL
        assert space.n == 2
        with pytest.raises(ValueError):
            Space1D.from_description({"degree": 3})

    def test_index_round_trip(self):
        space = Space1D(Mesh1D.uniform(0, 1, 3), 5)
        seen = set()
        for block in range(space.bubble_blocks + 1):
            for element in range(space.block_size(block)):
                i = space.interlace_index(block, element)
                assert space.deinterlace_index(i) == (block, element)
                seen.add(i)
        assert seen == set(range(space.dim))
        with pytest.raises(IndexError):
            space.interlace_index(1, 3)

    def test_interlace(self):
        blocks = np.arange(12).reshape(3, 4)
        v = interlace(blocks)
        assert v[2 * 4 + 1] == blocks[2, 1]
        nptest.assert_array_equal(deinterlace(v, 4), blocks)


class TestOperators:
    @pytest.mark.parametrize("bc", BCS)
    @pytest.mark.parametrize("breakpoints", [[-1, -0.5, 0, 0.5, 1], [0.0, 0.1, 0.4, 1.5]])
    def test_match_quadrature(self, bc, breakpoints):
        space = Space1D(Mesh1D.from_sequence(breakpoints), 6, bc)
        ops = assemble_operators(space, omega=1.0)
        M, L = quadrature_operators(space)
        nptest.assert_allclose(ops.mass.to_dense(), M, atol=1e-13)
        nptest.assert_allclose(ops.laplacian.to_dense(), L, atol=1e-12)
        nptest.assert_allclose(ops.shifted.to_dense(), L + 0.5 * M, atol=1e-12)

    def test_structure(self):
        space = Space1D(Mesh1D.uniform(-1, 1, 4), 8)
        ops = assemble_operators(space)
        assert (ops.laplacian.ell, ops.laplacian.u) == (0, 0)
        assert (ops.mass.ell, ops.mass.u) == (2, 2)
        assert ops.mass.structure() == (3, 4, 7, 2, 2, 0, 1)
        assert ops.mass.is_symmetric() and ops.laplacian.is_symmetric()

    def test_single_dirichlet_element(self, rng):
        space = Space1D(Mesh1D.uniform(-1, 1, 1), 6)
        ops = space.operators()
        assert ops.laplacian.m == 0 and space.dim == 5
        X = rng.standard_normal((space.dim, 3))
        for A in (ops.mass, ops.laplacian, ops.shifted):
            dense = A.to_dense()
            nptest.assert_allclose(A.matvec(X), dense @ X, atol=1e-13)
            nptest.assert_allclose(A.matvec(X[:, 0]), dense @ X[:, 0], atol=1e-13)
        nptest.assert_allclose(np.diag(ops.laplacian.to_dense())[:3], [2 / 3, 2 / 5, 2 / 7])

    def test_low_degree_mass_bandwidth(self):
        ops = assemble_operators(Space1D(Mesh1D.uniform(0, 1, 3), 2))
        assert (ops.mass.ell, ops.mass.u) == (1, 1)

    def test_neumann_needs_shift(self):
        space = Space1D(Mesh1D.uniform(-1, 1, 2), 4, "full")
        with pytest.raises(ValueError):
            assemble_operators(space, 0.0)
        with pytest.raises(ValueError):
            assemble_operators(Space1D(Mesh1D.uniform(-1, 1, 2), 4), -1.0)

    def test_operators_are_cached(self):
        space = Space1D(Mesh1D.uniform(-1, 1, 2), 4)
        assert space.operators(2.0) is space.operators(2.0)

    @pytest.mark.parametrize("bc", BCS)
    def test_conversion_and_evaluation(self, bc):
        space = Space1D(Mesh1D.from_sequence([-1, -0.2, 0.5, 1]), 5, bc)
        R, D = conversion_matrix(space), derivative_matrix(space)
        assert R.shape == D.shape == (space.legendre_dim, space.dim)
        t = np.linspace(-0.95, 0.95, 7)
        for e in range(space.n):
            x = space.mesh.element_points(t)[e]
            V, Dv = element_basis(space, e, t)
            nptest.assert_allclose(evaluate_basis(space, x), V, atol=1e-14)
            P = np.zeros((t.size, space.legendre_dim))
            P[:, np.arange(space.degree + 1) * space.n + e] = legendre_vander(space.degree, t)
            nptest.assert_allclose(P @ D.toarray(), Dv, atol=1e-12)

    def test_derivative_top_block_empty(self):
        space = Space1D(Mesh1D.uniform(0, 1, 3), 4)
        D = derivative_matrix(space).toarray()
        assert not np.any(D[space.degree * space.n:])

    def test_weights(self):
        space = Space1D(Mesh1D.from_sequence([0, 1, 3]), 2)
        nptest.assert_allclose(legendre_weights(space), [1, 2, 1 / 3, 2 / 3, 1 / 5, 2 / 5])


class TestRightHandSide:
    def test_rhs_1d_matches_quadrature(self, rng):
        space = Space1D(Mesh1D.from_sequence([0, 0.3, 1.0]), 5, "dirichlet-neumann")
        f = rng.standard_normal(space.legendre_dim)
        t, w = np.polynomial.legendre.leggauss(12)
        expected = np.zeros(space.dim)
        for e in range(space.n):
            V, _ = element_basis(space, e, t)
            fe = legendre_vander(space.degree, t) @ f[np.arange(space.degree + 1) * space.n + e]
            expected += V.T @ (w * space.mesh.widths[e] / 2 * fe)
        nptest.assert_allclose(assemble_rhs_1d(space, f), expected, atol=1e-13)

    def test_rhs_zero_pads_missing_degrees(self, rng):
        space = Space1D(Mesh1D.uniform(0, 1, 2), 4)
        f = rng.standard_normal(space.degree * space.n)
        padded = np.concatenate([f, np.zeros(space.n)])
        nptest.assert_allclose(assemble_rhs_1d(space, f), assemble_rhs_1d(space, padded))
        with pytest.raises(IncompatibleStructure):
            assemble_rhs_1d(space, np.ones(space.n + 1))

    def test_rhs_2d_is_tensor_product(self, rng):
        sx = Space1D(Mesh1D.uniform(0, 1, 2), 3)
        sy = Space1D(Mesh1D.uniform(-1, 1, 3), 4, "full")
        fx, fy = rng.standard_normal(sx.legendre_dim), rng.standard_normal(sy.legendre_dim)
        G = assemble_rhs_2d(sx, sy, np.outer(fx, fy))
        nptest.assert_allclose(G, np.outer(assemble_rhs_1d(sx, fx), assemble_rhs_1d(sy, fy)), atol=1e-14)


class TestScreenedPoisson1D:
    @pytest.mark.parametrize("bc,omega", [("dirichlet", 0.0), ("dirichlet", 3.0), ("full", 1.0),
                                          ("neumann-dirichlet", 0.0), ("dirichlet-neumann", 2.0)])
    def test_manufactured(self, bc, omega):
        space = Space1D(Mesh1D.uniform(-1, 1, 3), 18, bc)
        mixed = space.bc in (BoundaryCondition.NEUMANN_DIRICHLET, BoundaryCondition.DIRICHLET_NEUMANN)
        k = math.pi / 4 if mixed else math.pi / 2
        trig = np.cos if space.bc.keep_left else np.sin

        def u(x):
            return trig(k * (x + 1))

        plan = TransformPlan.for_space(space)
        f_leg = analysis_1d(plan, (k * k + omega * omega) * u(plan.grid))
        coeffs = solve_screened_poisson_1d(space, omega, f_leg)
        x = np.linspace(-1, 1, 41)
        nptest.assert_allclose(evaluate_basis(space, x) @ coeffs, u(x), atol=1e-10)
