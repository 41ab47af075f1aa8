import math

import numpy as np
import pytest

from cbkdv import (
    ExpSeries,
    NonIntegerExponent,
    NormalizedParams,
    OrderMismatch,
    OverflowToInfinity,
    TruncationMode,
    build_system,
    eval_jacobian,
    eval_system,
    evaluate_profile,
    evaluate_series,
    ode_residual,
    series_power,
    series_product,
)
from conftest import rel_close, vec_rel_close

PAPER_NORM = NormalizedParams(a=0.4, b=0.01, c=0.2, r=1, p=1)


def random_instance(rng, p_choices=(1, 2, 3), n_lo=1, n_hi=5):
    p = int(rng.choice(p_choices))
    order = int(rng.integers(n_lo, n_hi + 1))
    norm = NormalizedParams(
        a=rng.uniform(-2, 2),
        b=rng.uniform(-2, 2),
        c=rng.uniform(-2, 2),
        r=rng.uniform(-2, 2),
        p=p,
    )
    coeffs = rng.uniform(-2, 2, order + 1) + 1j * rng.uniform(-2, 2, order + 1)
    return norm, ExpSeries(tuple(coeffs))


class TestSeriesArithmetic:
    def test_product_of_constants(self):
        out = series_product(ExpSeries((1,)), ExpSeries((1,)), 0)
        assert out.coeffs == (1 + 0j,)

    def test_product_adds_exponents(self):
        out = series_product(ExpSeries((0, 1)), ExpSeries((0, 1)), 2)
        assert out.coeffs == (0j, 0j, 1 + 0j)

    def test_product_convolution(self):
        out = series_product(ExpSeries((1, 2)), ExpSeries((3, 4)), 2)
        assert out.coeffs == (3 + 0j, 10 + 0j, 8 + 0j)

    def test_power_of_single_harmonic(self):
        out = series_power(ExpSeries((0, 1)), 3, 3)
        assert out.coeffs == (0j, 0j, 0j, 1 + 0j)

    def test_power_binomial(self):
        out = series_power(ExpSeries((1, 1)), 2, 2)
        assert out.coeffs == (1 + 0j, 2 + 0j, 1 + 0j)

    def test_power_of_constant(self):
        out = series_power(ExpSeries((2,)), 4, 0)
        assert out.coeffs == (16 + 0j,)

    def test_power_rejects_zero_exponent(self):
        with pytest.raises(ValueError):
            series_power(ExpSeries((1, 1)), 0, 2)

    def test_power_exactness_pointwise(self, rng):
        # evaluating the expanded power equals powering the evaluation
        for _ in range(20):
            order = int(rng.integers(1, 4))
            m = int(rng.integers(2, 5))
            coeffs = rng.uniform(-1, 1, order + 1) + 1j * rng.uniform(-1, 1, order + 1)
            x = ExpSeries(tuple(coeffs))
            powered = series_power(x, m, m * order)
            for zeta in rng.uniform(-3, 0.5, 20):
                direct = evaluate_series(x, float(zeta)) ** m
                expanded = evaluate_series(powered, float(zeta))
                assert rel_close(expanded, direct, 1e-12)


class TestBuildAndEval:
    def test_reference_square_system_at_unit_harmonic(self):
        sys = build_system(PAPER_NORM, 1, TruncationMode.SQUARE)
        values = eval_system(sys, ExpSeries((0, 1)))
        assert values == pytest.approx([0.0, 0.2], abs=1e-15)

    def test_reference_full_system_at_unit_harmonic(self):
        sys = build_system(PAPER_NORM, 1, TruncationMode.FULL)
        values = eval_system(sys, ExpSeries((0, 1)))
        assert values == pytest.approx([0.0, 0.2, 0.4, 0.01], abs=1e-15)

    def test_hand_expanded_polynomials(self, rng):
        # order 1: P_0 = -U0 + 0.4 U0^2 + 0.01 U0^3,
        #          P_1 = 0.2 U1 + 0.8 U0 U1 + 0.03 U0^2 U1
        sys = build_system(PAPER_NORM, 1, TruncationMode.SQUARE)
        for _ in range(20):
            u0, u1 = rng.uniform(-2, 2, 2) + 1j * rng.uniform(-2, 2, 2)
            values = eval_system(sys, ExpSeries((u0, u1)))
            p0 = -u0 + 0.4 * u0**2 + 0.01 * u0**3
            p1 = 0.2 * u1 + 0.8 * u0 * u1 + 0.03 * u0**2 * u1
            assert rel_close(values[0], p0, 1e-13)
            assert rel_close(values[1], p1, 1e-13)

    def test_linear_system_is_decoupled(self, rng):
        norm = NormalizedParams(a=0, b=0, c=0.7, r=2.0, p=1)
        sys = build_system(norm, 3, TruncationMode.SQUARE)
        coeffs = rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4)
        values = eval_system(sys, ExpSeries(tuple(coeffs)))
        for m in range(4):
            expected = (m * m + 0.7 * m - 2.0) * coeffs[m]
            assert rel_close(values[m], expected, 1e-14)

    def test_full_mode_equation_count(self):
        sys = build_system(PAPER_NORM, 3, TruncationMode.FULL)
        assert sys.equation_count == 10
        sys2 = build_system(NormalizedParams(a=1, b=1, c=0, r=1, p=2), 4, TruncationMode.FULL)
        assert sys2.equation_count == 21

    def test_square_mode_equation_count(self):
        sys = build_system(PAPER_NORM, 3, TruncationMode.SQUARE)
        assert sys.equation_count == 4

    def test_zero_root(self, rng):
        for _ in range(10):
            norm, _ = random_instance(rng)
            order = int(rng.integers(1, 5))
            for mode in TruncationMode:
                sys = build_system(norm, order, mode)
                zeros = ExpSeries((0,) * (order + 1))
                assert np.all(eval_system(sys, zeros) == 0)

    def test_non_integer_p_rejected(self):
        with pytest.raises(NonIntegerExponent):
            build_system(NormalizedParams(a=1, b=0, c=0, r=1, p=1.5), 2)

    def test_order_mismatch(self):
        sys = build_system(PAPER_NORM, 2, TruncationMode.SQUARE)
        with pytest.raises(OrderMismatch):
            eval_system(sys, ExpSeries((0, 1)))
        with pytest.raises(OrderMismatch):
            eval_jacobian(sys, ExpSeries((0, 1)))


class TestJacobian:
    def test_linear_case_diagonal(self):
        norm = NormalizedParams(a=0, b=0, c=0.5, r=1.5, p=1)
        sys = build_system(norm, 2, TruncationMode.SQUARE)
        jac = eval_jacobian(sys, ExpSeries((0.3, -0.2, 0.9)))
        expected = np.diag([m * m + 0.5 * m - 1.5 for m in range(3)])
        assert np.allclose(jac, expected, atol=1e-15)

    def test_reference_entry(self):
        sys = build_system(PAPER_NORM, 1, TruncationMode.SQUARE)
        jac = eval_jacobian(sys, ExpSeries((0, 1)))
        assert jac[1, 0] == pytest.approx(0.8, rel=1e-14)

    def test_against_finite_differences(self, rng):
        h = 1e-6
        for _ in range(20):
            norm, series = random_instance(rng, n_hi=4)
            mode = TruncationMode.FULL if rng.random() < 0.5 else TruncationMode.SQUARE
            sys = build_system(norm, series.order, mode)
            jac = eval_jacobian(sys, series)
            base = series.array()
            for k in range(series.order + 1):
                bumped_p = base.copy()
                bumped_m = base.copy()
                bumped_p[k] += h
                bumped_m[k] -= h
                fd = (
                    eval_system(sys, ExpSeries(tuple(bumped_p)))
                    - eval_system(sys, ExpSeries(tuple(bumped_m)))
                ) / (2 * h)
                err = np.abs(jac[:, k] - fd)
                scale = np.maximum(1.0, np.maximum(np.abs(jac[:, k]), np.abs(fd)))
                assert np.all(err / scale <= 1e-6)


class TestEvaluate:
    def test_at_zero(self):
        assert evaluate_series(ExpSeries((1, 2)), 0.0) == 3

    def test_exponential_identity(self):
        assert evaluate_series(ExpSeries((0, 1)), math.log(2)) == pytest.approx(2, rel=1e-15)

    def test_geometric_sum(self):
        value = evaluate_series(ExpSeries((1, 1, 1)), math.log(3))
        assert value == pytest.approx(13, rel=1e-14)

    def test_overflow_reported(self):
        with pytest.raises(OverflowToInfinity):
            evaluate_series(ExpSeries((0, 1)), 1000.0)
        with pytest.raises(OverflowToInfinity):
            evaluate_series(ExpSeries((0, 0, 1e300)), 20.0)

    def test_profile_constant(self):
        pt = evaluate_profile(ExpSeries((3.5,)), -2.0)
        assert (pt.u, pt.du, pt.ddu) == (3.5, 0, 0)

    def test_profile_first_harmonic(self):
        pt = evaluate_profile(ExpSeries((0, 1)), 0.0)
        assert (pt.u, pt.du, pt.ddu) == (1, 1, 1)

    def test_profile_second_harmonic_weights(self):
        pt = evaluate_profile(ExpSeries((0, 0, 5)), 0.0)
        assert (pt.u, pt.du, pt.ddu) == (5, 10, 20)


class TestStructuralProperties:
    def test_exactness_identity(self, rng):
        # the full harmonic expansion re-sums to the pointwise ODE residual
        for _ in range(30):
            norm, series = random_instance(rng)
            sys = build_system(norm, series.order, TruncationMode.FULL)
            values = eval_system(sys, series)
            for zeta in rng.uniform(-5, 1, 10):
                harmonic_sum = sum(
                    values[m] * math.exp(m * float(zeta)) for m in range(len(values))
                )
                pointwise = ode_residual(norm, evaluate_profile(series, float(zeta)))
                assert rel_close(harmonic_sum, pointwise, 1e-12)

    def test_gauge_scaling(self, rng):
        # U_k -> lambda^k U_k maps P_m -> lambda^m P_m
        for _ in range(30):
            norm, series = random_instance(rng)
            sys = build_system(norm, series.order, TruncationMode.FULL)
            values = eval_system(sys, series)
            for _ in range(10):
                lam = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
                scaled = ExpSeries(
                    tuple(lam**k * u for k, u in enumerate(series.coeffs))
                )
                lhs = eval_system(sys, scaled)
                rhs = np.array(
                    [lam**m * values[m] for m in range(len(values))]
                )
                assert vec_rel_close(lhs, rhs, 1e-12)
