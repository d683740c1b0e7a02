import math
from fractions import Fraction

import numpy as np
import pytest

from octads.hyperbolic_kernel import (
    ExpTermSum,
    SMALL_S_SWITCH,
    apply_lowering,
    composed_distance,
    dump_term_table,
    hyperbolic_heat_kernel,
    hyperbolic_heat_kernel_composed,
    lowering_terms,
)


class TestLoweringOperator:
    def test_single_application(self):
        out = apply_lowering(ExpTermSum.gaussian(), sign=-1)
        assert dict(out.items()) == {(1, 1, 0): {1: Fraction(1, 2)}}

    def test_double_application_canonical_terms(self):
        out = apply_lowering(apply_lowering(ExpTermSum.gaussian()))
        expected = {
            (0, 2, 0): {1: Fraction(-1, 2)},
            (1, 2, 1): {1: Fraction(1, 2)},
            (2, 2, 0): {2: Fraction(1, 4)},
        }
        assert dict(out.items()) == expected
        assert len(out) == 3

    def test_linearity(self):
        a = lowering_terms(1)
        b = lowering_terms(2)
        combined = apply_lowering(a + b)
        separate = apply_lowering(a) + apply_lowering(b)
        assert dict(combined.items()) == dict(separate.items())

    @pytest.mark.parametrize("k", [2, 4, 7])
    def test_against_symbolic_differentiation(self, k):
        sp = pytest.importorskip("sympy")
        mp = pytest.importorskip("mpmath")
        s, t = sp.symbols("s t", positive=True)
        expr = sp.exp(-s ** 2 / (4 * t))
        for _ in range(k):
            expr = -sp.diff(expr, s) / sp.sinh(s)
        reference = sp.lambdify((t, s), expr * sp.exp(s ** 2 / (4 * t)), "mpmath")
        terms = lowering_terms(k)
        # the symbolic expression cancels catastrophically at small s, so the
        # oracle runs at 60 digits
        with mp.workdps(60):
            for tv, sv in [(0.5, 0.7), (1.0, 1.9), (2.0, 3.3), (0.7, 0.2)]:
                mine = terms.evaluate(tv, np.array([sv]))[0]
                ref = float(reference(mp.mpf(tv), mp.mpf(sv)))
                assert mine == pytest.approx(ref, rel=1e-10), (k, tv, sv)

    def test_term_counts(self):
        assert len(lowering_terms(4)) == 11
        assert len(lowering_terms(7)) == 36


class TestTaylorBranch:
    def test_taylor_table_has_no_negative_or_odd_powers(self):
        # construction would raise otherwise; also check the head coefficient
        table = lowering_terms(1).taylor_coefficients()
        assert table[0] == {1: Fraction(1, 2)}
        assert all(e >= 0 and e % 2 == 0 for e in table)

    @pytest.mark.parametrize("k", [1, 4, 7])
    def test_switchover_consistency(self, k):
        # both evaluation routes agree in an overlap window below the switch,
        # where the direct route still has full accuracy
        terms = lowering_terms(k)
        for s in (0.8, 1.0, 1.1, SMALL_S_SWITCH - 1e-9):
            for t in (0.5, 2.0):
                taylor = terms.evaluate(t, np.array([s]))[0]
                direct = terms.evaluate_factor(t, np.array([s]))[0]
                assert abs(taylor - direct) <= 1e-9 * abs(taylor), (k, s, t)

    def test_direct_route_degrades_below_window(self):
        # deep inside the small-s region the direct route cancels
        # catastrophically; the agreement bound is correspondingly loose there
        terms = lowering_terms(7)
        taylor = terms.evaluate(0.5, np.array([0.4]))[0]
        direct = terms.evaluate_factor(0.5, np.array([0.4]))[0]
        assert abs(taylor - direct) <= 1e-6 * abs(taylor)


class TestKernelValues:
    def test_euclidean_line_at_origin(self):
        assert hyperbolic_heat_kernel(1, 1.0, 0.0) == pytest.approx(
            1.0 / math.sqrt(4.0 * math.pi), abs=1e-15
        )

    def test_three_dim_closed_form(self):
        for t in (0.5, 1.0, 2.0):
            for s in (1e-8, 0.3, 1.0, 2.5, 5.0):
                ref = (math.exp(-t) / (4.0 * math.pi * t) ** 1.5
                       * (s / math.sinh(s)) * math.exp(-s * s / (4.0 * t)))
                assert hyperbolic_heat_kernel(3, t, s) == pytest.approx(ref, rel=1e-12)

    def test_on_diagonal_finite(self):
        for n in (9, 15):
            v = hyperbolic_heat_kernel(n, 1.0, 0.0)
            assert np.isfinite(v) and v > 0

    def test_positivity_grid(self):
        ss = np.linspace(0.0, 12.0, 60)
        for n in (1, 3, 9, 15):
            for t in (0.5, 1.0, 2.0):
                assert np.all(hyperbolic_heat_kernel(n, t, ss) > 0)

    @pytest.mark.parametrize("n", [9, 15])
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_normalization(self, n, t):
        from octads.special_fn import gl_nodes

        omega = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
        s_max = (n - 1) * t + 12.0 * math.sqrt(t) + 5.0
        s, w = gl_nodes(1200, 1e-9, s_max)
        integral = float(np.dot(w, hyperbolic_heat_kernel(n, t, s) * omega * np.sinh(s) ** (n - 1)))
        assert abs(integral - 1.0) <= 1e-6

    @pytest.mark.parametrize("n", [9, 15])
    def test_radial_heat_equation(self, n):
        for t in (0.5, 1.0, 2.0):
            for s in (0.5, 1.0, 2.0):
                h_t, h_s = 1e-3 * t, 1e-3

                def ddt(h):
                    return (hyperbolic_heat_kernel(n, t + h, s)
                            - hyperbolic_heat_kernel(n, t - h, s)) / (2.0 * h)

                c, f = ddt(h_t), ddt(h_t / 2.0)
                time_deriv = f + (f - c) / 3.0

                def lap(h):
                    vp = hyperbolic_heat_kernel(n, t, s + h)
                    v0 = hyperbolic_heat_kernel(n, t, s)
                    vm = hyperbolic_heat_kernel(n, t, s - h)
                    return (vp - 2.0 * v0 + vm) / h ** 2 \
                        + (n - 1.0) / math.tanh(s) * (vp - vm) / (2.0 * h)

                c, f = lap(h_s), lap(h_s / 2.0)
                spatial = f + (f - c) / 3.0
                assert abs(time_deriv - spatial) <= 1e-5 * abs(time_deriv) + 1e-10, (n, t, s)

    def test_dimension_recursion_by_finite_differences(self):
        # kernel in n+2 dimensions = exp(-n t)/(2 pi) * -(1/sinh) d/ds of the n kernel
        for n in (1, 3, 5, 7, 9, 11, 13):
            for (t, s) in [(0.7, 0.9), (1.3, 2.2)]:
                def dds(h):
                    return (hyperbolic_heat_kernel(n, t, s + h)
                            - hyperbolic_heat_kernel(n, t, s - h)) / (2.0 * h)

                c, f = dds(1e-4), dds(5e-5)
                deriv = f + (f - c) / 3.0
                lifted = math.exp(-n * t) / (2.0 * math.pi) * (-deriv / math.sinh(s))
                target = hyperbolic_heat_kernel(n + 2, t, s)
                assert lifted == pytest.approx(target, rel=1e-7), (n, t, s)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            hyperbolic_heat_kernel(8, 1.0, 0.5)
        with pytest.raises(ValueError):
            hyperbolic_heat_kernel(-3, 1.0, 0.5)
        with pytest.raises(ValueError):
            hyperbolic_heat_kernel(17, 1.0, 0.5)
        with pytest.raises(ValueError):
            hyperbolic_heat_kernel(15, -1.0, 0.5)
        with pytest.raises(ValueError):
            hyperbolic_heat_kernel(15, 1.0, -0.5)


class TestComposedArgument:
    def test_u_zero_is_exact(self):
        for r in (0.0, 0.3, 2.0):
            assert composed_distance(r, 0.0) == r

    def test_distance_value(self):
        # cosh(s) = cosh(1)^2
        expected = math.acosh(math.cosh(1.0) ** 2)
        assert composed_distance(1.0, 1.0) == pytest.approx(expected, rel=1e-14)

    def test_composed_matches_direct(self):
        for (r, u) in [(0.0, 0.7), (1.0, 1.0), (2.0, 0.2), (0.5, 3.0)]:
            s = composed_distance(r, u)
            a = hyperbolic_heat_kernel_composed(15, 1.0, r, u)
            b = hyperbolic_heat_kernel(15, 1.0, s)
            assert a == pytest.approx(b, rel=1e-14)

    def test_large_arguments_stable(self):
        v = hyperbolic_heat_kernel_composed(15, 2.0, 40.0, 25.0)
        assert v == 0.0 or (np.isfinite(v) and v >= 0.0)


class TestTermTable:
    def test_first_line_has_highest_csch_power(self):
        lines = dump_term_table(15)
        powers = [int(line.split(",")[2]) for line in lines]
        assert powers[0] == max(powers) == 13
        assert powers == sorted(powers, reverse=True)

    def test_k1_table_exact(self):
        assert dump_term_table(3) == ["1/2/t,1,1,0"]

    def test_tables_are_deterministic(self):
        assert dump_term_table(9) == dump_term_table(9)
