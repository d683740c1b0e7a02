"""Jacobi and Chebyshev polynomials and the terminating hypergeometric sum.

Everything here is evaluated by three-term recurrences; closed-form
normalization constants go through lgamma to stay inside double range.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def jacobi_poly(m: int, x, alpha: float = 2.5, beta: float = 2.5):
    """Degree-m Jacobi polynomial by the standard three-term recurrence.

    Valid for any real x, including |x| > 1 where the polynomial is its own
    analytic continuation.  Accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if m == 0:
        return p_prev if p_prev.shape else float(p_prev)
    p = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    for n in range(2, m + 1):
        a_n = 2.0 * n * (n + alpha + beta) * (2.0 * n + alpha + beta - 2.0)
        b1 = (2.0 * n + alpha + beta - 1.0) * (2.0 * n + alpha + beta) * (2.0 * n + alpha + beta - 2.0)
        b0 = (2.0 * n + alpha + beta - 1.0) * (alpha * alpha - beta * beta)
        c_n = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + alpha + beta)
        p, p_prev = ((b1 * x + b0) * p - c_n * p_prev) / a_n, p
    return p if p.shape else float(p)


def jacobi_sequence(m_max: int, x, alpha: float = 2.5, beta: float = 2.5) -> np.ndarray:
    """All degrees 0..m_max at once, stacked on a new leading axis."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((m_max + 1,) + x.shape)
    out[0] = 1.0
    if m_max >= 1:
        out[1] = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0
    for n in range(2, m_max + 1):
        a_n = 2.0 * n * (n + alpha + beta) * (2.0 * n + alpha + beta - 2.0)
        b1 = (2.0 * n + alpha + beta - 1.0) * (2.0 * n + alpha + beta) * (2.0 * n + alpha + beta - 2.0)
        b0 = (2.0 * n + alpha + beta - 1.0) * (alpha * alpha - beta * beta)
        c_n = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + alpha + beta)
        out[n] = ((b1 * x + b0) * out[n - 1] - c_n * out[n - 2]) / a_n
    return out


def jacobi_end_value(m: int, alpha: float = 2.5) -> float:
    """Value at x = 1: Gamma(m+alpha+1) / (m! Gamma(alpha+1))."""
    return math.exp(math.lgamma(m + alpha + 1.0) - math.lgamma(m + 1.0) - math.lgamma(alpha + 1.0))


def jacobi_norm_sq(m: int) -> float:
    """Orthogonality norm of the (5/2, 5/2) family under the sin^6 weight.

    Equals the integral over [0, pi] of [P_m(cos eta)]^2 sin^6(eta), via the
    closed-form constant 2^6/(2m+6) * Gamma(m+7/2)^2 / (Gamma(m+6) m!).
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    lg = (
        6.0 * math.log(2.0)
        - math.log(2.0 * m + 6.0)
        + 2.0 * math.lgamma(m + 3.5)
        - math.lgamma(m + 6.0)
        - math.lgamma(m + 1.0)
    )
    return math.exp(lg)


def chebyshev_T(n: int, x):
    """Chebyshev polynomial of the first kind; T_n(cosh u) = cosh(n u)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    t_prev = np.ones_like(x)
    if n == 0:
        return t_prev if t_prev.shape else float(t_prev)
    t = x.copy()
    for _ in range(n - 1):
        t, t_prev = 2.0 * x * t - t_prev, t
    return t if t.shape else float(t)


def hyp2f1_terminating(m: int, x: float) -> float:
    """The finite sum 2F1(m+3, -m-3, 1/2; (1-x)/2), which has m+4 terms.

    Coefficients are accumulated in log space with explicit sign tracking;
    the factorial ratios overflow double range near m = 30 if formed directly.
    For x >= 1 every term is nonnegative, which is the regime the kernel
    evaluation uses (argument cosh u).
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    z = (1.0 - x) / 2.0
    if z == 0.0:
        return 1.0
    k = np.arange(m + 4)
    log_c = (
        _lgamma_vec(m + 3 + k) - math.lgamma(m + 3)
        + math.lgamma(m + 4) - _lgamma_vec(m + 4 - k)
        - (_lgamma_vec(0.5 + k) - math.lgamma(0.5))
        - _lgamma_vec(k + 1.0)
    )
    sign = np.where(k % 2 == 0, 1.0, -1.0) * np.sign(z) ** k
    return float(np.sum(sign * np.exp(log_c + k * math.log(abs(z)))))


_lgamma_vec = np.vectorize(math.lgamma, otypes=[float])


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    """Cached Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def gl_nodes(n: int, a: float, b: float):
    """Gauss-Legendre rule mapped to [a, b]."""
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w
