from __future__ import annotations

import numpy as np
import numpy.testing as nptest
import pytest
from scipy.special import eval_legendre

from arrowhead.basis import (
    BandedMatrix,
    bubble_eval,
    legendre_derivative,
    legendre_eval,
    legendre_mass,
    legendre_vander,
    lowering_matrix,
    reference_mass_bubble,
    reference_weak_laplacian,
)
from arrowhead.errors import IncompatibleStructure


def gauss(k: int = 40):
    return np.polynomial.legendre.leggauss(k)


class TestLegendre:
    @pytest.mark.parametrize("k", [0, 1, 2, 5, 17, 40])
    def test_matches_scipy(self, k):
        x = np.linspace(-1, 1, 33)
        nptest.assert_allclose(legendre_eval(k, x), eval_legendre(k, x), atol=1e-13)

    def test_vander_columns(self):
        x = np.linspace(-1, 1, 9)
        V = legendre_vander(6, x)
        for k in range(7):
            nptest.assert_allclose(V[:, k], eval_legendre(k, x), atol=1e-14)

    def test_scalar_in_scalar_out(self):
        assert legendre_eval(3, 0.5) == pytest.approx(eval_legendre(3, 0.5))
        assert np.ndim(bubble_eval(2, 0.3)) == 0

    def test_endpoint_values(self):
        for k in range(8):
            assert legendre_eval(k, 1.0) == pytest.approx(1.0)
            assert legendre_eval(k, -1.0) == pytest.approx((-1) ** k)

    @pytest.mark.parametrize("x", [1.5, -1.01, [0.0, 2.0]])
    def test_outside_domain(self, x):
        with pytest.raises(ValueError):
            legendre_eval(3, x)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            legendre_vander(-1, [0.0])

    def test_derivative_against_finite_differences(self):
        x = np.linspace(-0.9, 0.9, 7)
        h = 1e-6
        for k in range(1, 9):
            fd = (legendre_eval(k, x + h) - legendre_eval(k, x - h)) / (2 * h)
            nptest.assert_allclose(legendre_derivative(k, x), fd, atol=1e-6)

    def test_derivative_at_endpoints(self):
        for k in range(6):
            assert legendre_derivative(k, 1.0) == pytest.approx(k * (k + 1) / 2)


class TestBubbles:
    @pytest.mark.parametrize("k", range(8))
    def test_vanish_at_endpoints(self, k):
        nptest.assert_allclose(bubble_eval(k, np.array([-1.0, 1.0])), 0.0, atol=1e-15)

    @pytest.mark.parametrize("k", range(8))
    def test_derivative_is_minus_next_legendre(self, k):
        x = np.linspace(-1, 1, 21)
        dW = (legendre_derivative(k, x) - legendre_derivative(k + 2, x)) / (2 * k + 3)
        nptest.assert_allclose(dW, -legendre_eval(k + 1, x), atol=1e-12)

    def test_lowering_matrix_expresses_bubbles(self):
        p = 7
        x = np.linspace(-1, 1, 15)
        L = lowering_matrix(p)
        assert L.shape == (p + 1, p - 1)
        assert (L.lam, L.mu) == (2, 0)
        W = legendre_vander(p, x) @ L.to_dense()
        for k in range(p - 1):
            nptest.assert_allclose(W[:, k], bubble_eval(k, x), atol=1e-14)

    def test_mass_matches_quadrature(self):
        p = 9
        t, w = gauss()
        W = np.column_stack([bubble_eval(k, t) for k in range(p - 1)])
        nptest.assert_allclose(reference_mass_bubble(p).to_dense(), W.T @ (w[:, None] * W), atol=1e-14)

    def test_mass_has_no_odd_offsets(self):
        M = reference_mass_bubble(8).to_dense()
        i, j = np.indices(M.shape)
        assert np.all(M[np.abs(i - j) % 2 == 1] == 0)

    def test_weak_laplacian_matches_quadrature(self):
        p = 9
        t, w = gauss()
        dW = np.column_stack([-legendre_eval(k + 1, t) for k in range(p - 1)])
        nptest.assert_allclose(reference_weak_laplacian(p).to_dense(), dW.T @ (w[:, None] * dW), atol=1e-14)

    def test_legendre_mass(self):
        nptest.assert_allclose(legendre_mass(3).to_dense(), np.diag([2.0, 2 / 3, 2 / 5, 2 / 7]))

    def test_degree_too_small(self):
        with pytest.raises(ValueError):
            reference_mass_bubble(1)


class TestBandedMatrix:
    def random_banded(self, rng, rows, cols, lam, mu):
        i, j = np.indices((rows, cols))
        a = rng.standard_normal((rows, cols))
        a[(i - j > lam) | (j - i > mu)] = 0.0
        return a

    @pytest.mark.parametrize("shape,lam,mu", [((6, 6), 1, 2), ((5, 8), 2, 0), ((8, 4), 0, 3), ((4, 4), 0, 0)])
    def test_dense_round_trip(self, rng, shape, lam, mu):
        a = self.random_banded(rng, *shape, lam, mu)
        B = BandedMatrix.from_dense(a, lam, mu)
        nptest.assert_array_equal(B.to_dense(), a)
        nptest.assert_array_equal(B.to_sparse().toarray(), a)
        nptest.assert_array_equal(BandedMatrix.from_sparse(B.to_sparse(), lam, mu).to_dense(), a)

    def test_storage_layout(self):
        a = np.arange(1.0, 10.0).reshape(3, 3)
        B = BandedMatrix.from_dense(a, 2, 2)
        for i in range(3):
            for j in range(3):
                assert B.data[B.mu + i - j, j] == a[i, j]

    def test_rejects_entries_outside_band(self):
        a = np.eye(4)
        a[3, 0] = 1.0
        with pytest.raises(IncompatibleStructure):
            BandedMatrix.from_dense(a, 1, 1)

    def test_products(self, rng):
        a = self.random_banded(rng, 7, 5, 2, 1)
        B = BandedMatrix.from_dense(a, 2, 1)
        x = rng.standard_normal(5)
        X = rng.standard_normal((5, 3))
        y = rng.standard_normal((7, 2))
        nptest.assert_allclose(B.matvec(x), a @ x)
        nptest.assert_allclose(B @ X, a @ X)
        nptest.assert_allclose(B.rmatvec(y), a.T @ y)
        nptest.assert_array_equal(B.T.to_dense(), a.T)
        assert (B.T.lam, B.T.mu) == (1, 2)

    def test_products_with_an_empty_side(self):
        tall = BandedMatrix.zeros(3, 0, 1, 1)
        nptest.assert_array_equal(tall.matvec(np.zeros(0)), np.zeros(3))
        nptest.assert_array_equal(tall.matvec(np.zeros((0, 2))), np.zeros((3, 2)))
        flat = BandedMatrix.zeros(0, 3, 1, 1)
        assert flat.matvec(np.ones((3, 2))).shape == (0, 2)
        nptest.assert_array_equal(flat.rmatvec(np.zeros((0, 4))), np.zeros((3, 4)))
        assert tall.rmatvec(np.ones(3)).shape == (0,)

    def test_matmul_and_add(self, rng):
        a = self.random_banded(rng, 6, 6, 1, 2)
        b = self.random_banded(rng, 6, 6, 2, 0)
        A, B = BandedMatrix.from_dense(a, 1, 2), BandedMatrix.from_dense(b, 2, 0)
        C = A @ B
        assert (C.lam, C.mu) == (3, 2)
        nptest.assert_allclose(C.to_dense(), a @ b, atol=1e-14)
        nptest.assert_allclose(A.add(B, -2.0).to_dense(), a - 2 * b)

    def test_scaling(self, rng):
        a = self.random_banded(rng, 5, 6, 1, 1)
        A = BandedMatrix.from_dense(a, 1, 1)
        d, r = rng.standard_normal(6), rng.standard_normal(5)
        nptest.assert_allclose(A.scale_columns(d).to_dense(), a * d[None, :])
        nptest.assert_allclose(A.scale_rows(r).to_dense(), r[:, None] * a)

    def test_symmetrized(self, rng):
        a = self.random_banded(rng, 6, 6, 2, 2)
        S = BandedMatrix.from_dense(a, 2, 2).symmetrized().to_dense()
        nptest.assert_array_equal(S, S.T)
        nptest.assert_allclose(S, 0.5 * (a + a.T))
