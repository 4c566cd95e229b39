"""Small dense complex linear-algebra and quadrature kernels.

Everything here operates on matrices of dimension <= 16; the physics
modules only ever need 3x3, 8x8 and 4x4 systems, plus Maxwellian
quadrature rules for the Doppler average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from numpy.polynomial.hermite import hermgauss

from .errors import ContractError, SingularSystemError, UnsupportedOrderError

COND_LIMIT = 1e12
MAX_DIM = 16
MAX_HERMITE_ORDER = 512


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    return a


def solve_linear(a, b) -> tuple[np.ndarray, float]:
    """Solve A x = b for a small dense complex system.

    Returns (x, residual) with residual = ||Ax - b||_inf.  Raises
    SingularSystemError when the condition number exceeds 1e12.
    """
    a = _as_square(a)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise ContractError("right-hand side length does not match matrix")
    if not (np.all(np.isfinite(a.view(float))) and np.all(np.isfinite(b.view(float)))):
        raise ContractError("non-finite entries in linear system")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(f"condition estimate {cond:.3e} exceeds {COND_LIMIT:.0e}")
    x = np.linalg.solve(a, b)
    residual = float(np.max(np.abs(a @ x - b)))
    tol = 1e-10 * (1.0 + float(np.max(np.abs(b))))
    if residual > tol:
        raise SingularSystemError(f"solve residual {residual:.3e} exceeds {tol:.3e}")
    return x, residual


def matrix_exponential(a) -> np.ndarray:
    """exp(A) for a small dense complex matrix."""
    a = _as_square(a)
    if a.shape[0] > MAX_DIM:
        raise ContractError(f"dimension {a.shape[0]} exceeds supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(a.view(float))):
        raise ContractError("non-finite entries in matrix exponential input")
    return sla.expm(a)


def stability_check(a) -> float:
    """Largest real part over the eigenvalues of A."""
    a = _as_square(a)
    return float(np.max(np.linalg.eigvals(a).real))


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and normalized weights approximating integral dv D(v) f(v)."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise ContractError("quadrature nodes/weights length mismatch")


def gauss_hermite_rule(n: int, mu: float) -> QuadratureRule:
    """Gauss-Hermite rule for the normalized Gaussian exp(-v^2/mu^2)/(sqrt(pi) mu).

    Exact for f polynomial of degree <= 2n-1.  mu = 0 collapses to the
    single stationary node.
    """
    if n < 1:
        raise UnsupportedOrderError("quadrature order must be >= 1")
    if n > MAX_HERMITE_ORDER:
        raise UnsupportedOrderError(f"order {n} exceeds supported maximum {MAX_HERMITE_ORDER}")
    if mu == 0.0 or n == 1:
        return QuadratureRule(np.zeros(max(n, 1))[:1], np.ones(1))
    x, w = hermgauss(n)
    weights = w / np.sqrt(np.pi)
    weights = weights / weights.sum()
    return QuadratureRule(mu * x, weights)


def gaussian_trapezoid_rule(n: int, mu: float, span: float = 3.0) -> QuadratureRule:
    """Uniform-grid rule on [-span*mu, span*mu] weighted by the Maxwellian.

    Dense fallback used when integrands carry structure much narrower than
    the Doppler width; also the brute-force oracle in tests.
    """
    if n < 1:
        raise UnsupportedOrderError("quadrature order must be >= 1")
    if mu == 0.0 or n == 1:
        return QuadratureRule(np.zeros(1), np.ones(1))
    nodes = np.linspace(-span * mu, span * mu, n)
    weights = np.exp(-((nodes / mu) ** 2))
    weights[0] *= 0.5
    weights[-1] *= 0.5
    weights = weights / weights.sum()
    return QuadratureRule(nodes, weights)


def propagation_integral(m, s, length: float) -> np.ndarray:
    """Closed-form integral  I = int_0^L exp(M u) S exp(M^H u) du.

    Solved through the Lyapunov equation M Y + Y M^H = S, for which
    I = exp(M L) Y exp(M^H L) - Y.  Falls back to composite
    Gauss-Legendre quadrature when the Lyapunov solve is unreliable
    (overlapping spectra of M and -M^H).
    """
    m = _as_square(m)
    s = np.asarray(s, dtype=complex)
    if length == 0.0:
        return np.zeros_like(s)
    s_scale = float(np.max(np.abs(s)))
    if s_scale == 0.0:
        return np.zeros_like(s)
    try:
        y = sla.solve_continuous_lyapunov(m, s)
        if np.all(np.isfinite(y.view(float))):
            resid = np.max(np.abs(m @ y + y @ m.conj().T - s))
            if resid <= 1e-9 * s_scale:
                t = matrix_exponential(m * length)
                return t @ y @ t.conj().T - y
    except (sla.LinAlgError, ValueError):
        pass
    return _quadrature_propagation_integral(m, s, length)


def _quadrature_propagation_integral(m, s, length: float, panels: int = 8, order: int = 16) -> np.ndarray:
    """Fixed high-order quadrature fallback for the propagation integral."""
    x, w = np.polynomial.legendre.leggauss(order)
    out = np.zeros_like(np.asarray(s, dtype=complex))
    h = length / panels
    for k in range(panels):
        lo = k * h
        u = lo + 0.5 * h * (x + 1.0)
        for ui, wi in zip(u, w):
            t = matrix_exponential(m * ui)
            out += (0.5 * h * wi) * (t @ s @ t.conj().T)
    return out
