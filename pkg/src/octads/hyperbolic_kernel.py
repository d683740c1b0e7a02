"""Closed-form heat kernels of odd-dimensional real hyperbolic spaces.

For dimension n = 2k+1 the kernel at distance s is an explicit prefactor
times the k-fold application of -(1/sinh s) d/ds to the Gaussian
exp(-s^2/4t).  The iterated derivative is expanded once, exactly, into a
canonical sum of terms

    coeff(1/t) * s^pow_s * csch(s)^pow_csch * coth(s)^pow_coth * exp(-s^2/4t)

with rational polynomial coefficients in 1/t.  Direct evaluation of that sum
is ill conditioned near s = 0 (individual terms grow like s^-2k while the sum
stays finite), so below a switch radius the sum is replaced by its exact
Taylor polynomial in s, also computed once in rational arithmetic; the
negative and odd powers cancel identically and both cancellations are
asserted during construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

# Term sums are evaluated below this radius via the cached Taylor polynomial
# of degree TAYLOR_ORDER; beyond it direct evaluation loses at most ~3 digits
# to cancellation.  The poles of csch^b coth^c at +-i pi have order up to 13,
# so the Taylor tail carries a C(n+12, 12) enhancement over (s/pi)^2n; at the
# switch radius and this order it is ~1e-22.
SMALL_S_SWITCH = 1.25
TAYLOR_ORDER = 84

MAX_DIMENSION = 15


@dataclass(frozen=True)
class ExpTerm:
    """One canonical term; coeff maps powers of (1/t) to rationals."""

    pow_s: int
    pow_csch: int
    pow_coth: int
    coeff: tuple  # ((j, Fraction), ...) sorted by j


class ExpTermSum:
    """Canonical sum of ExpTerms keyed by the exponent triple."""

    def __init__(self, data=None):
        # data: {(pow_s, pow_csch, pow_coth): {j: Fraction}}
        self._data = {}
        self._taylor = None
        if data:
            for key, poly in data.items():
                clean = {j: q for j, q in poly.items() if q != 0}
                if clean:
                    self._data[key] = clean

    @classmethod
    def gaussian(cls) -> "ExpTermSum":
        """The bare Gaussian: a single unit term."""
        return cls({(0, 0, 0): {0: Fraction(1)}})

    def __len__(self):
        return len(self._data)

    def __add__(self, other: "ExpTermSum") -> "ExpTermSum":
        out = {k: dict(v) for k, v in self._data.items()}
        for key, poly in other._data.items():
            tgt = out.setdefault(key, {})
            for j, q in poly.items():
                tgt[j] = tgt.get(j, Fraction(0)) + q
        return ExpTermSum(out)

    def terms(self) -> list[ExpTerm]:
        """Terms sorted by descending (pow_csch, pow_coth, pow_s)."""
        keys = sorted(self._data, key=lambda k: (k[1], k[2], k[0]), reverse=True)
        return [
            ExpTerm(pow_s=a, pow_csch=b, pow_coth=c,
                    coeff=tuple(sorted(self._data[(a, b, c)].items())))
            for (a, b, c) in keys
        ]

    def items(self):
        return self._data.items()

    def evaluate_factor(self, t: float, s) -> np.ndarray:
        """The sum without the shared Gaussian, valid for s > 0 away from 0."""
        s = np.asarray(s, dtype=float)
        csch = 1.0 / np.sinh(s)
        coth = np.cosh(s) * csch
        out = np.zeros_like(s)
        for (a, b, c), poly in self._data.items():
            coef = 0.0
            for j, q in poly.items():
                coef += float(q) * t ** (-j)
            out += coef * s ** a * csch ** b * coth ** c
        return out

    def taylor_coefficients(self):
        """Exact Taylor coefficients {even exponent: {j: Fraction}} at s = 0."""
        if self._taylor is None:
            self._taylor = _taylor_table(self)
        return self._taylor

    def evaluate(self, t: float, s) -> np.ndarray:
        """The factor in front of the Gaussian, stable down to s = 0."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.empty_like(s)
        small = s < SMALL_S_SWITCH
        if np.any(~small):
            out[~small] = self.evaluate_factor(t, s[~small])
        if np.any(small):
            table = self.taylor_coefficients()
            coeffs = np.zeros(TAYLOR_ORDER // 2 + 1)
            for e, poly in table.items():
                coeffs[e // 2] = sum(float(q) * t ** (-j) for j, q in poly.items())
            out[small] = np.polynomial.polynomial.polyval(s[small] ** 2, coeffs)
        return out


def apply_lowering(term_sum: ExpTermSum, sign: int = -1) -> ExpTermSum:
    """One application of sign * (1/sinh s) d/ds to term_sum * Gaussian.

    Differentiation rules on a term s^a csch^b coth^c exp(-s^2/4t):
      d/ds -> a s^(a-1) csch^b coth^c  - b s^a csch^b coth^(c+1)
              - c s^a csch^(b+2) coth^(c-1) - (1/2t) s^(a+1) csch^b coth^c
    followed by multiplication with csch.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = {}

    def add(key, j, val):
        poly = out.setdefault(key, {})
        poly[j] = poly.get(j, Fraction(0)) + val

    for (a, b, c), poly in term_sum.items():
        for j, q in poly.items():
            v = sign * q
            if a >= 1:
                add((a - 1, b + 1, c), j, v * a)
            if b >= 1:
                add((a, b + 1, c + 1), j, -v * b)
            if c >= 1:
                add((a, b + 3, c - 1), j, -v * c)
            add((a + 1, b + 1, c), j + 1, -v * Fraction(1, 2))
    return ExpTermSum(out)


@lru_cache(maxsize=None)
def lowering_terms(k: int) -> ExpTermSum:
    """k-fold application of -(1/sinh s) d/ds to the Gaussian, cached."""
    if k == 0:
        return ExpTermSum.gaussian()
    return apply_lowering(lowering_terms(k - 1), sign=-1)


# ---------------------------------------------------------------------------
# exact Taylor expansion machinery for the small-s branch


def _bernoulli(n: int) -> Fraction:
    return _bernoulli_list(n)[n]


@lru_cache(maxsize=None)
def _bernoulli_list(n_max: int):
    b = [Fraction(1)]
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * b[j]
        b.append(-acc / (m + 1))
    return b


@lru_cache(maxsize=8)
def _laurent_series(kind: str, e_max: int):
    """Laurent coefficients {odd exponent: Fraction} of csch or coth at 0."""
    series = {-1: Fraction(1)}
    n = 1
    while 2 * n - 1 <= e_max:
        b2n = _bernoulli(2 * n)
        fact = Fraction(math.factorial(2 * n))
        if kind == "coth":
            series[2 * n - 1] = Fraction(2) ** (2 * n) * b2n / fact
        elif kind == "csch":
            series[2 * n - 1] = (Fraction(2) - Fraction(2) ** (2 * n)) * b2n / fact
        else:
            raise ValueError(kind)
        n += 1
    return series


def _mul_series(a: dict, b: dict, e_max: int) -> dict:
    out = {}
    for ea, qa in a.items():
        for eb, qb in b.items():
            e = ea + eb
            if e <= e_max:
                out[e] = out.get(e, Fraction(0)) + qa * qb
    return out


def _taylor_table(term_sum: ExpTermSum):
    """Exact Taylor table of a term sum."""
    total: dict[int, dict[int, Fraction]] = {}
    for (a, b, c), poly in term_sum.items():
        n_factors = b + c
        series = {a: Fraction(1)}
        remaining = n_factors
        for kind, count in (("csch", b), ("coth", c)):
            base = _laurent_series(kind, TAYLOR_ORDER + n_factors + 1)
            for _ in range(count):
                remaining -= 1
                series = _mul_series(series, base, TAYLOR_ORDER + remaining)
        for e, q in series.items():
            if e > TAYLOR_ORDER:
                continue
            tgt = total.setdefault(e, {})
            for j, qj in poly.items():
                tgt[j] = tgt.get(j, Fraction(0)) + q * qj

    table = {}
    for e, polyj in total.items():
        polyj = {j: q for j, q in polyj.items() if q != 0}
        if not polyj:
            continue
        # the summed factor is smooth and even in s: anything else is a bug
        if e < 0:
            raise AssertionError(f"negative power s^{e} survived cancellation")
        if e % 2 == 1:
            raise AssertionError(f"odd power s^{e} survived cancellation")
        table[e] = polyj
    return table


# ---------------------------------------------------------------------------
# public kernel evaluations


def _check_dimension(n: int) -> int:
    if n < 1 or n % 2 == 0:
        raise ValueError(f"dimension must be a positive odd integer, got {n}")
    if n > MAX_DIMENSION:
        raise ValueError(f"dimensions above {MAX_DIMENSION} are not supported")
    return (n - 1) // 2


def hyperbolic_heat_kernel(n: int, t: float, s) -> float | np.ndarray:
    """Heat kernel of n-dimensional hyperbolic space at distance s, n odd.

    Normalized against the Riemannian volume: integrating the result times
    the sphere area Omega_{n-1} sinh^{n-1}(s) over s gives 1.
    """
    k = _check_dimension(n)
    if t <= 0:
        raise ValueError("time must be positive")
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 0):
        raise ValueError("distance must be nonnegative")
    pref = math.exp(-k * k * t) / ((2.0 * math.pi) ** k * math.sqrt(4.0 * math.pi * t))
    val = pref * lowering_terms(k).evaluate(t, s_arr) * np.exp(-s_arr * s_arr / (4.0 * t))
    return val if np.ndim(s) else float(val[0])


def composed_distance(r, u) -> np.ndarray | float:
    """Distance s with cosh(s) = cosh(r) cosh(u), computed without cancellation."""
    r_arr = np.asarray(r, dtype=float)
    u_arr = np.asarray(u, dtype=float)
    s = np.arcsinh(np.hypot(np.sinh(r_arr) * np.cosh(u_arr), np.sinh(u_arr)))
    s = np.where(u_arr == 0.0, r_arr, s)
    return s if (np.ndim(r) or np.ndim(u)) else float(s)


def hyperbolic_heat_kernel_composed(n: int, t: float, r, u) -> float | np.ndarray:
    """Kernel evaluated at the composed argument cosh(r) cosh(u)."""
    r_arr = np.asarray(r, dtype=float)
    u_arr = np.asarray(u, dtype=float)
    if np.any(r_arr < 0) or np.any(u_arr < 0):
        raise ValueError("distances must be nonnegative")
    return hyperbolic_heat_kernel(n, t, composed_distance(r, u))


def _format_coeff(poly: tuple) -> str:
    parts = []
    for j, q in poly:
        if j == 0:
            parts.append(str(q))
        elif j == 1:
            parts.append(f"{q}/t")
        else:
            parts.append(f"{q}/t^{j}")
    return " + ".join(parts)


def dump_term_table(n: int) -> list[str]:
    """One line per canonical term: coeff, pow_s, pow_csch, pow_coth.

    Lines are ordered by descending (pow_csch, pow_coth, pow_s) so the table
    is stable and diffable; the first line has the highest csch power.
    """
    k = _check_dimension(n)
    lines = []
    for term in lowering_terms(k).terms():
        lines.append(
            f"{_format_coeff(term.coeff)},{term.pow_s},{term.pow_csch},{term.pow_coth}"
        )
    return lines
