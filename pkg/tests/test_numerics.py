import numpy as np
import pytest

from laddertangle import numerics
from laddertangle.errors import (
    ContractError,
    SingularSystemError,
    UnsupportedOrderError,
)


class TestSolveLinear:
    def test_identity(self, rng):
        b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        x, res = numerics.solve_linear(np.eye(4), b)
        assert np.allclose(x, b)
        assert res <= 1e-10 * (1.0 + np.max(np.abs(b)))

    def test_diagonal(self):
        x, _ = numerics.solve_linear(np.diag([2.0, 4.0]), np.array([2.0, 4.0]))
        assert np.allclose(x, [1.0, 1.0])

    def test_random_residual(self, rng):
        for _ in range(20):
            a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            a += 8.0 * np.eye(8)  # keep it well conditioned
            b = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            x, res = numerics.solve_linear(a, b)
            assert np.max(np.abs(a @ x - b)) <= 1e-10 * (1.0 + np.max(np.abs(b)))
            assert res <= 1e-10 * (1.0 + np.max(np.abs(b)))

    def test_singular_raises(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SingularSystemError):
            numerics.solve_linear(a, np.ones(2))

    def test_nonsquare_rejected(self):
        with pytest.raises(ContractError):
            numerics.solve_linear(np.ones((2, 3)), np.ones(2))


class TestMatrixExponential:
    def test_zero(self):
        assert np.allclose(numerics.matrix_exponential(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        a = np.diag([1.0 + 2.0j, -0.5])
        assert np.allclose(numerics.matrix_exponential(a), np.diag(np.exp(a.diagonal())))

    def test_nilpotent(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert np.allclose(numerics.matrix_exponential(a), [[1.0, 1.0], [0.0, 1.0]])

    def test_commuting_product_rule(self, rng):
        for _ in range(10):
            d1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            d2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            u = rng.standard_normal((4, 4))
            q, _ = np.linalg.qr(u)
            a = q @ np.diag(d1) @ q.T.conj()
            b = q @ np.diag(d2) @ q.T.conj()
            lhs = numerics.matrix_exponential(a + b)
            rhs = numerics.matrix_exponential(a) @ numerics.matrix_exponential(b)
            assert np.max(np.abs(lhs - rhs)) < 1e-9 * max(1.0, np.max(np.abs(lhs)))

    def test_nonfinite_rejected(self):
        a = np.array([[np.nan, 0.0], [0.0, 0.0]])
        with pytest.raises(ContractError):
            numerics.matrix_exponential(a)

    def test_dimension_cap(self):
        with pytest.raises(ContractError):
            numerics.matrix_exponential(np.zeros((17, 17)))


class TestGaussHermite:
    def test_normalization(self):
        rule = numerics.gauss_hermite_rule(64, 530.0)
        assert abs(np.sum(rule.weights) - 1.0) < 1e-12

    def test_second_moment(self):
        rule = numerics.gauss_hermite_rule(32, 1.0)
        assert abs(np.sum(rule.weights * rule.nodes**2) - 0.5) < 1e-12

    def test_nodes_symmetric(self):
        rule = numerics.gauss_hermite_rule(33, 2.0)
        assert np.allclose(np.sort(rule.nodes), -np.sort(-rule.nodes)[::-1])

    def test_order_cap(self):
        with pytest.raises(UnsupportedOrderError):
            numerics.gauss_hermite_rule(513, 1.0)

    def test_lorentzian_vs_trapezoid(self):
        # broad Lorentzian is smooth on the Gaussian scale, so 128 nodes suffice
        mu = 1.0
        rule = numerics.gauss_hermite_rule(128, mu)

        def f(v):
            return 50.0**2 / (50.0**2 + (v - 0.3) ** 2)

        gh = np.sum(rule.weights * f(rule.nodes))
        v = np.linspace(-6 * mu, 6 * mu, 200001)
        w = np.exp(-(v / mu) ** 2)
        dense = np.trapezoid(w * f(v), v) / np.trapezoid(w, v)
        assert abs(gh - dense) < 1e-8


class TestGaussianTrapezoid:
    def test_normalization(self):
        rule = numerics.gaussian_trapezoid_rule(401, 530.0)
        assert abs(np.sum(rule.weights) - 1.0) < 1e-12

    def test_matches_hermite_on_polynomial(self):
        trap = numerics.gaussian_trapezoid_rule(4001, 1.0, span=6.0)
        gh = numerics.gauss_hermite_rule(16, 1.0)
        for f in (lambda v: v**2, lambda v: v**4 - v):
            a = np.sum(trap.weights * f(trap.nodes))
            b = np.sum(gh.weights * f(gh.nodes))
            assert abs(a - b) < 1e-6


class TestStabilityCheck:
    def test_negative_identity(self):
        assert numerics.stability_check(-np.eye(3)) == pytest.approx(-1.0)

    def test_diagonal(self):
        a = np.diag([-1.0, -2.0 + 3.0j])
        assert numerics.stability_check(a) == pytest.approx(-1.0)


class TestPropagationIntegral:
    def test_matches_quadrature(self, rng):
        for _ in range(5):
            m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            m -= 3.0 * np.eye(4)
            s = rng.standard_normal((4, 4))
            s = s @ s.T + 1e-3 * np.eye(4)
            direct = numerics.propagation_integral(m, s, 0.7)
            quad = numerics._quadrature_propagation_integral(m, s, 0.7)
            assert np.max(np.abs(direct - quad)) < 1e-8 * max(1.0, np.max(np.abs(direct)))
