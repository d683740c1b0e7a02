"""Radial heat kernel on the 7-sphere fiber and its analytic continuation.

The kernel is the spectral series over Jacobi (5/2, 5/2) eigenfunctions with
eigenvalues m(m+6).  Setting the second argument to cosh(u) instead of cos(u)
continues the series to the hyperbolic range, which is how the fiber enters
the first integral representation of the full kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special_fn import jacobi_end_value, jacobi_norm_sq


class SeriesConvergenceError(RuntimeError):
    """Spectral series failed to meet its tail bound within the degree cap."""


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for all spectral series.

    mode selects the coefficient convention: "normalized" uses 1/N_m from the
    orthogonality norms (the kernel then integrates to 1 against the sin^6
    weight), "raw" keeps the constant 2/N_m that circulates in closed-form
    displays of this series and integrates to 2.  All validation runs on
    "normalized"; "raw" is retained for the reconciliation audit.
    """

    tol: float = 1e-12
    m_cap: int = 256
    mode: str = "normalized"

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.m_cap < 1:
            raise ValueError("m_cap must be at least 1")
        if self.mode not in ("normalized", "raw"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class FiberKernelValue:
    value: float
    m_used: int
    tail_bound: float


def fiber_eigenvalue(m: int) -> int:
    """Eigenvalue m(m+6) of degree m."""
    return m * (m + 6)


def fiber_mode_multiplicity(m: int) -> int:
    """Dimension (m+3)/3 * C(m+5, 5) of the degree-m eigenspace on the 7-sphere.

    These are the weights with which the modes enter the expansion of a point
    mass at the pole: 1, 8, 35, 112, 294, 672, ...
    """
    num = (m + 3) * math.comb(m + 5, 5)
    assert num % 3 == 0
    return num // 3


def spectral_coeff(m: int, mode: str = "normalized") -> float:
    """Series coefficient of degree m in the requested convention."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    if mode == "normalized":
        return 1.0 / jacobi_norm_sq(m)
    if mode == "raw":
        lg = (
            (4 * m + 7) * math.log(2.0)
            + math.lgamma(m + 1.0)
            + math.lgamma(m + 6.0)
            + 2.0 * math.lgamma(m + 4.0)
            - math.lgamma(2.0 * m + 7.0)
            - math.lgamma(2.0 * m + 6.0)
        )
        return math.exp(lg) / math.pi
    raise ValueError(f"unknown mode {mode!r}")


def _series_matrix(t, etas, us, continued, ctrl: SeriesControl, m_fixed=None):
    """Spectral series evaluated on the grid etas x us.

    Returns (matrix, m_used, tail_bound).  The tail rule bounds the next term
    by coeff * exp(-m(m+6) t) * P_m(x_max) * P_m(1), with P_m evaluated
    directly at the largest second argument; termination needs two consecutive
    passes.  With m_fixed the series is summed to exactly that degree, which
    keeps grid sweeps smooth for finite differencing.
    """
    etas = np.atleast_1d(np.asarray(etas, dtype=float))
    us = np.atleast_1d(np.asarray(us, dtype=float))
    xe = np.cos(etas)
    xu = np.cosh(us) if continued else np.cos(us)
    x_max = float(np.max(xu))

    out = np.zeros((etas.size, us.size))
    pe_prev = np.ones_like(xe)
    pu_prev = np.ones_like(xu)
    pe = pb = pu = None
    pb_prev = 1.0  # P_m at x_max
    scale = 0.0
    below = 0
    last_bound = math.inf
    cap = ctrl.m_cap if m_fixed is None else m_fixed
    alpha = beta = 2.5

    for m in range(cap + 1):
        if m == 0:
            pe, pu, pb = pe_prev, pu_prev, pb_prev
        elif m == 1:
            pe = 3.5 * xe
            pu = 3.5 * xu
            pb = 3.5 * x_max
            pe_prev = np.ones_like(xe)
            pu_prev = np.ones_like(xu)
            pb_prev = 1.0
        else:
            a_n = 2.0 * m * (m + alpha + beta) * (2.0 * m + alpha + beta - 2.0)
            b1 = (2.0 * m + alpha + beta - 1.0) * (2.0 * m + alpha + beta) * (2.0 * m + alpha + beta - 2.0)
            c_n = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * (2.0 * m + alpha + beta)
            pe, pe_prev = (b1 * xe * pe - c_n * pe_prev) / a_n, pe
            pu, pu_prev = (b1 * xu * pu - c_n * pu_prev) / a_n, pu
            pb, pb_prev = (b1 * x_max * pb - c_n * pb_prev) / a_n, pb
        if not np.isfinite(pb):
            raise SeriesConvergenceError(
                f"degree-{m} polynomial overflowed at argument {x_max:.3e}; "
                "the requested (t, u_max) combination is outside the supported range"
            )
        damp = spectral_coeff(m, ctrl.mode) * math.exp(-fiber_eigenvalue(m) * t)
        out += damp * np.outer(pe, pu)
        scale = max(scale, float(np.max(np.abs(out))))
        if m_fixed is None:
            last_bound = damp * abs(pb) * jacobi_end_value(m)
            below = below + 1 if last_bound <= ctrl.tol * max(scale, 1e-300) else 0
            if m >= 2 and below >= 2:
                return out, m, last_bound
    if m_fixed is not None:
        return out, cap, 0.0
    raise SeriesConvergenceError(
        f"series not converged at degree cap {ctrl.m_cap} (t={t}, bound={last_bound:.3e})"
    )


def fiber_heat_kernel(t: float, eta: float, u: float, continued: bool = False,
                      ctrl: SeriesControl | None = None) -> FiberKernelValue:
    """Fiber kernel at angles (eta, u), or at (eta, iu) when continued.

    For the continued branch u is the hyperbolic coordinate (second argument
    cosh u); otherwise u is an angle in [0, pi] like eta.
    """
    if t <= 0:
        raise ValueError("time must be positive")
    if not 0.0 <= eta <= math.pi:
        raise ValueError("eta must lie in [0, pi]")
    if continued:
        if u < 0:
            raise ValueError("continued coordinate must be nonnegative")
    elif not 0.0 <= u <= math.pi:
        raise ValueError("u must lie in [0, pi]")
    ctrl = ctrl or SeriesControl()
    mat, m_used, tail = _series_matrix(t, eta, u, continued, ctrl)
    return FiberKernelValue(value=float(mat[0, 0]), m_used=m_used, tail_bound=tail)


def fiber_mode_profile(m: int, eta: float) -> float:
    """Normalized angular profile of degree-m modes, equal to 1 at the pole.

    Computed from the integral of (cos eta + i sin eta cos phi)^m against
    sin^5(phi), rewritten with x = cos(phi) so the integrand is a polynomial
    and the Gauss-Legendre rule is exact.  The imaginary residue vanishes by
    symmetry and is asserted small.
    """
    if m < 0:
        raise ValueError("degree must be nonnegative")
    from .special_fn import gl_nodes

    n_nodes = (m + 7) // 2 + 8
    x, w = gl_nodes(n_nodes, -1.0, 1.0)
    z = np.cos(eta) + 1j * np.sin(eta) * x
    val = (15.0 / 16.0) * np.sum(w * z ** m * (1.0 - x * x) ** 2)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise AssertionError(f"imaginary residue {val.imag:.3e} exceeds tolerance")
    return float(val.real)
