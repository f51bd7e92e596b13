import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscmodes.numerics import (
    Grid,
    LogScaledReal,
    OdeIntegrationError,
    QuadratureError,
    SQRT_PI,
    UnitScale,
    adaptive_quad,
    erfi_asymptotic,
    first_derivative,
    gauss_integral_upper,
    growing_integral,
    growing_integral_float,
    ode_integrate,
    second_derivative,
)

finite_floats = st.floats(min_value=-1e6, max_value=1e6,
                          allow_nan=False, allow_infinity=False)


# ---------------------------------------------------------------------------
# UnitScale
# ---------------------------------------------------------------------------

class TestUnitScale:
    def test_default_is_dimensionless_identity(self):
        u = UnitScale()
        assert u.length == 1.0 and u.energy == 1.0 and u.time == 1.0
        assert u.q_to_dimensionless(1.7) == 1.7
        assert u.t_to_dimensionless(0.3) == 0.3

    def test_characteristic_scales(self):
        u = UnitScale(hbar=2.0, mass=0.5, omega=4.0)
        assert u.length == pytest.approx(math.sqrt(2.0 / (0.5 * 4.0)))
        assert u.energy == pytest.approx(8.0)
        assert u.time == pytest.approx(0.25)

    @given(q=finite_floats, hbar=st.floats(0.1, 10), m=st.floats(0.1, 10),
           w=st.floats(0.1, 10))
    @settings(max_examples=50)
    def test_round_trip(self, q, hbar, m, w):
        u = UnitScale(hbar, m, w)
        assert u.q_from_dimensionless(u.q_to_dimensionless(q)) == pytest.approx(q, abs=1e-12)
        assert u.t_from_dimensionless(u.t_to_dimensionless(q)) == pytest.approx(q, abs=1e-12)

    @pytest.mark.parametrize("bad", [{"hbar": 0.0}, {"mass": -1.0}, {"omega": math.inf}])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            UnitScale(**bad)


# ---------------------------------------------------------------------------
# LogScaledReal
# ---------------------------------------------------------------------------

class TestLogScaledReal:
    @given(x=st.floats(min_value=-1e300, max_value=1e300,
                       allow_nan=False, allow_infinity=False))
    @settings(max_examples=200)
    def test_round_trip_faithful(self, x):
        back = LogScaledReal.from_float(x).to_float()
        if x == 0.0:
            assert back == 0.0
        else:
            assert math.copysign(1.0, back) == math.copysign(1.0, x)
            assert back == pytest.approx(x, rel=1e-15)

    @given(a=st.floats(1e-100, 1e100), b=st.floats(1e-100, 1e100),
           sa=st.sampled_from([-1, 1]), sb=st.sampled_from([-1, 1]))
    @settings(max_examples=100)
    def test_product_and_quotient_compose_in_log_space(self, a, b, sa, sb):
        la = LogScaledReal.from_float(sa * a)
        lb = LogScaledReal.from_float(sb * b)
        prod = la * lb
        assert prod.sign == sa * sb
        assert prod.logmag == pytest.approx(la.logmag + lb.logmag, abs=1e-12)
        quot = la / lb
        assert quot.logmag == pytest.approx(la.logmag - lb.logmag, abs=1e-12)

    @given(a=st.floats(-1e10, 1e10), b=st.floats(-1e10, 1e10))
    @settings(max_examples=100)
    def test_addition_matches_floats(self, a, b):
        total = LogScaledReal.from_float(a) + LogScaledReal.from_float(b)
        assert total.to_float() == pytest.approx(a + b, rel=1e-12, abs=1e-6)

    def test_no_overflow_far_beyond_doubles(self):
        huge = LogScaledReal(1, 5000.0)
        assert (huge * huge).logmag == 10000.0
        assert huge.to_float() == math.inf  # conversion saturates, algebra does not

    def test_exact_cancellation_gives_zero(self):
        x = LogScaledReal.from_float(3.5)
        assert (x - x).is_zero
        assert (x + (-x)).to_float() == 0.0

    def test_zero_handling(self):
        zero = LogScaledReal.zero()
        one = LogScaledReal.from_float(1.0)
        assert (zero * one).is_zero
        assert (zero + one).to_float() == 1.0
        with pytest.raises(ZeroDivisionError):
            one / zero

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            LogScaledReal(2, 0.0)


# ---------------------------------------------------------------------------
# Grid
# ---------------------------------------------------------------------------

class TestGrid:
    def test_symmetric_factory_is_exactly_symmetric(self):
        grid = Grid.symmetric(4.0, 1.0 / 256.0)
        assert grid.is_symmetric
        assert np.all(grid.points == -grid.points[::-1])
        assert grid.points[grid.n // 2] == 0.0

    def test_uniform_factory(self):
        grid = Grid.uniform(0.0, 2.0, 0.25)
        assert grid.n == 9
        assert grid.extent == (0.0, 2.0)

    def test_rejects_nonuniform_and_decreasing(self):
        with pytest.raises(ValueError):
            Grid(np.array([0.0, 0.1, 0.3]), 0.1)
        with pytest.raises(ValueError):
            Grid(np.array([0.0, -0.1, -0.2]), 0.1)
        with pytest.raises(ValueError):
            Grid(np.array([0.0]), 0.1)

    def test_interior_slice_excludes_stencil_band(self):
        grid = Grid.uniform(0.0, 2.0, 0.1)
        inner = grid.points[grid.interior()]
        assert inner[0] == pytest.approx(0.5)
        assert inner[-1] == pytest.approx(1.5)


# ---------------------------------------------------------------------------
# adaptive quadrature
# ---------------------------------------------------------------------------

class TestAdaptiveQuad:
    def test_gaussian_segment_against_series_oracle(self):
        # int_0^1 exp(-y^2) dy = sum_k (-1)^k / (k! (2k+1)), computed here
        oracle = sum((-1) ** k / (math.factorial(k) * (2 * k + 1)) for k in range(25))
        value = adaptive_quad(lambda y: math.exp(-y * y), 0.0, 1.0, tol=1e-12)
        assert value == pytest.approx(oracle, abs=1e-12)
        assert value == pytest.approx(0.7468241, abs=1e-7)

    def test_odd_integrand_symmetric_limits(self):
        assert adaptive_quad(lambda y: y, -1.0, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_full_gaussian_via_tail_truncation(self):
        value = adaptive_quad(lambda y: math.exp(-y * y), -40.0, 40.0, tol=1e-12)
        assert value == pytest.approx(SQRT_PI, abs=1e-12)

    def test_singular_integrand_raises(self):
        with pytest.raises(QuadratureError):
            adaptive_quad(lambda y: math.sin(1.0 / y) / y if y != 0 else 0.0,
                          1e-12, 1.0, tol=1e-13, budget=30)

    def test_rejects_bad_limits(self):
        with pytest.raises(ValueError):
            adaptive_quad(lambda y: y, 1.0, 0.0)
        with pytest.raises(ValueError):
            adaptive_quad(lambda y: y, 0.0, math.inf)


# ---------------------------------------------------------------------------
# ODE integration
# ---------------------------------------------------------------------------

class TestOdeIntegrate:
    def test_growing_rhs_matches_quadrature_oracle(self):
        oracle = adaptive_quad(lambda y: math.exp(y * y), 0.0, 1.0, tol=1e-12)
        traj = ode_integrate(lambda q, y: [math.exp(q * q)], [0.0], (0.0, 1.0), tol=1e-12)
        assert traj.at(1.0)[0] == pytest.approx(oracle, abs=1e-10)

    def test_constant_solution(self):
        traj = ode_integrate(lambda q, y: [0.0], [3.25], (0.0, 5.0))
        assert traj.at(2.0)[0] == 3.25

    def test_first_order_system_reproduces_growing_integral(self):
        # f' = h, h' = 2 q h from (0, 1): f is the growing integral
        traj = ode_integrate(lambda q, y: [y[1], 2.0 * q * y[1]], [0.0, 1.0],
                             (0.0, 2.0), tol=1e-12)
        assert traj.at(2.0)[0] == pytest.approx(growing_integral_float(2.0), rel=1e-10)

    def test_blowup_raises(self):
        with pytest.raises(OdeIntegrationError):
            ode_integrate(lambda t, y: [y[0] ** 2], [1.0], (0.0, 2.0))

    def test_dense_sampling_onto_grid(self):
        grid = Grid.uniform(0.0, 1.0, 0.125)
        traj = ode_integrate(lambda t, y: [math.cos(t)], [0.0], (0.0, 1.0), grid=grid)
        assert np.allclose(traj.component0, np.sin(grid.points), atol=1e-10)
        with pytest.raises(ValueError):
            ode_integrate(lambda t, y: [1.0], [0.0], (0.0, 0.5),
                          grid=Grid.uniform(0.0, 1.0, 0.125))


# ---------------------------------------------------------------------------
# special-function kernels
# ---------------------------------------------------------------------------

class TestGrowingIntegral:
    def test_zero_at_origin(self):
        assert growing_integral(0.0).is_zero

    def test_matches_quadrature_oracle_at_one(self):
        oracle = adaptive_quad(lambda y: math.exp(y * y), 0.0, 1.0, tol=1e-12)
        assert growing_integral_float(1.0) == pytest.approx(oracle, rel=1e-12)
        assert growing_integral_float(1.0) == pytest.approx(1.46265, abs=1e-5)

    @given(q=st.floats(1e-3, 25.0))
    @settings(max_examples=100)
    def test_odd_exactly(self, q):
        plus, minus = growing_integral(q), growing_integral(-q)
        assert minus.sign == -plus.sign
        assert minus.logmag == plus.logmag

    def test_derivative_is_growing_exponential(self):
        h = 1e-3
        qs = np.arange(-2.0, 2.0 + h, h)
        vals = np.array([growing_integral_float(q) for q in qs])
        deriv = first_derivative(vals, h)
        inner = slice(5, -5)
        assert np.allclose(deriv[inner], np.exp(qs[inner] ** 2), rtol=1e-10)

    def test_four_term_series_at_four(self):
        # the error of the K = 3 truncation is a small multiple (~1.46x here)
        # of the first omitted term; the terms share a sign, so the classical
        # alternating-series bound of 1x does not apply
        series = math.exp(16.0) / 8.0 * (1 + 1 / 32 + 3 / 1024 + 15 / 32768)
        next_term = math.exp(16.0) / 8.0 * (105 / 32 ** 4)
        err = abs(growing_integral_float(4.0) - series)
        assert err <= 1.6 * next_term

    def test_log_scaled_far_beyond_double_range(self):
        big = growing_integral(30.0)
        assert big.sign == 1
        assert big.logmag == pytest.approx(900.0 - math.log(60.0), abs=0.01)
        assert big.to_float() == math.inf


class TestGaussIntegralUpper:
    def test_half_gaussian_at_origin(self):
        assert gauss_integral_upper(0.0) == pytest.approx(SQRT_PI / 2.0, rel=1e-15)

    @given(r=st.floats(-6.0, 6.0))
    @settings(max_examples=100)
    def test_complement_identity(self, r):
        total = gauss_integral_upper(r) + gauss_integral_upper(-r)
        assert total == pytest.approx(SQRT_PI, abs=1e-12)

    def test_strictly_decreasing_and_bounded(self):
        rs = np.linspace(-5.0, 5.0, 41)
        vals = [gauss_integral_upper(r) for r in rs]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert all(0.0 < v < SQRT_PI for v in vals)

    def test_tail_against_quadrature_oracle(self):
        oracle = adaptive_quad(lambda y: math.exp(-y * y), 3.0, 40.0, tol=1e-14)
        assert gauss_integral_upper(3.0) == pytest.approx(oracle, rel=1e-12)
        # leading tail form exp(-9)/6, good to the first 1/(2 r^2) correction
        assert gauss_integral_upper(3.0) == pytest.approx(math.exp(-9.0) / 6.0, rel=0.06)

    def test_leading_tail_ratio(self):
        r = 8.0
        ratio = gauss_integral_upper(r) * 2.0 * r * math.exp(r * r)
        assert abs(ratio - 1.0) <= 1.0 / (2 * r * r) + 1e-4


class TestErfiAsymptotic:
    def test_leading_term(self):
        assert erfi_asymptotic(2.0, 0).value.to_float() == pytest.approx(
            math.exp(4.0) / 4.0, rel=1e-15)

    def test_four_terms_closed_form(self):
        expected = math.exp(4.0) / 4.0 * (1 + 1 / 8 + 3 / 64 + 15 / 512)
        assert erfi_asymptotic(2.0, 3).value.to_float() == pytest.approx(expected, rel=1e-14)

    def test_reported_next_term(self):
        report = erfi_asymptotic(2.0, 3)
        expected = math.exp(4.0) / 4.0 * (105 / 8 ** 4)
        assert report.next_term.to_float() == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("z", [2.0, 3.0, 4.0, 6.0])
    def test_truncation_error_envelope(self, z):
        # same-sign series: the truncation error stays within 2.5x the first
        # omitted term for z >= 2 and K <= 5 (factor measured by sweep)
        exact = adaptive_quad(lambda y: math.exp(y * y), 0.0, z, tol=1e-11)
        for terms in range(6):
            report = erfi_asymptotic(z, terms)
            err = abs(exact - report.value.to_float())
            assert err <= 2.5 * report.next_term.to_float()

    def test_truncation_vs_growing_integral_at_four(self):
        report = erfi_asymptotic(4.0, 3)
        rel_err = abs(growing_integral_float(4.0) - report.value.to_float()) \
            / growing_integral_float(4.0)
        bound = 105 / (16 * 4.0 ** 8)  # the k = 4 term, relative
        assert rel_err <= 1.6 * bound

    def test_odd_in_z(self):
        plus = erfi_asymptotic(3.0, 2).value
        minus = erfi_asymptotic(-3.0, 2).value
        assert minus.sign == -plus.sign and minus.logmag == plus.logmag

    def test_rejects_origin_and_negative_terms(self):
        with pytest.raises(ValueError):
            erfi_asymptotic(0.0, 3)
        with pytest.raises(ValueError):
            erfi_asymptotic(2.0, -1)


# ---------------------------------------------------------------------------
# stencils
# ---------------------------------------------------------------------------

class TestStencils:
    def test_exact_on_quadratic(self):
        h = 0.01
        qs = np.arange(-1.0, 1.0 + h, h)
        d2 = second_derivative(qs ** 2, h)
        assert np.max(np.abs(d2 - 2.0)) < 1e-10

    def test_gaussian_against_analytic_oracle(self):
        h = 1e-2
        qs = np.arange(-4.0, 4.0 + h, h)
        vals = np.exp(-qs ** 2 / 2)
        expected = (qs ** 2 - 1.0) * np.exp(-qs ** 2 / 2)
        assert np.max(np.abs(second_derivative(vals, h) - expected)) < 1e-8

    def test_sine_eigenfunction(self):
        h = 0.02
        qs = np.arange(0.0, 6.0 + h, h)
        err = np.max(np.abs(second_derivative(np.sin(qs), h) + np.sin(qs)))
        assert err < 50 * h ** 6

    def test_sixth_order_convergence(self):
        def error(h):
            qs = np.arange(-2.0, 2.0 + h, h)
            vals = np.exp(-qs ** 2 / 2)
            expected = (qs ** 2 - 1.0) * np.exp(-qs ** 2 / 2)
            return np.max(np.abs(second_derivative(vals, h) - expected))

        assert error(0.05) / error(0.025) >= 2 ** 5

    def test_first_derivative(self):
        h = 0.01
        qs = np.arange(0.0, 3.0 + h, h)
        assert np.max(np.abs(first_derivative(np.sin(qs), h) - np.cos(qs))) < 1e-10

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            second_derivative(np.ones(5), 0.1)
