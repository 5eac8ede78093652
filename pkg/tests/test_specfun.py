import math

import mpmath
import numpy as np
import pytest
from scipy import integrate, special

from numerics.specfun import (
    appendix_deficit_tail,
    bessel_j,
    bessel_j_deriv,
    bessel_j_orders,
    bessel_j_second_deriv,
    bessel_j_table,
    gaussian_deficit_tail,
    log_upper_gamma,
    upper_gamma_remainder,
)
from numerics import specfun
from utils.errors import EnvelopeError


class TestBessel:
    @pytest.mark.parametrize("order", [0, 1, 2, 5, 10, 40, 100, 300, 512])
    def test_matches_scipy_across_envelope(self, order):
        r = np.concatenate([[0.0, 1e-6, 0.3, 0.999], np.linspace(1.0, 100.0, 397)])
        np.testing.assert_allclose(bessel_j(order, r), special.jv(order, r), rtol=0, atol=1e-12)

    def test_table_shape_and_orders(self):
        r = np.array([[0.5, 2.0], [7.5, 30.0]])
        table = bessel_j_table(6, r)
        assert table.shape == (7, 2, 2)
        np.testing.assert_allclose(table[3], special.jv(3, r), atol=1e-13)

    def test_single_radius_orders(self):
        values = bessel_j_orders(20, 3.8317)
        np.testing.assert_allclose(values, special.jv(np.arange(21), 3.8317), atol=1e-13)

    def test_origin(self):
        values = bessel_j_orders(5, 0.0)
        np.testing.assert_array_equal(values, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0])

    def test_scalar_in_scalar_out(self):
        assert isinstance(bessel_j(0, 2.0), float)

    def test_mpmath_oracle_high_order(self):
        with mpmath.workdps(40):
            expected = float(mpmath.besselj(50, 60))
        assert bessel_j(50, 60.0) == pytest.approx(expected, abs=1e-12)

    def test_derivatives(self):
        r = np.linspace(0.5, 40.0, 200)
        np.testing.assert_allclose(bessel_j_deriv(0, r), -special.jv(1, r), atol=1e-12)
        np.testing.assert_allclose(bessel_j_deriv(7, r), special.jvp(7, r), atol=1e-12)
        np.testing.assert_allclose(bessel_j_second_deriv(1, r), special.jvp(1, r, n=2), atol=1e-12)
        np.testing.assert_allclose(bessel_j_second_deriv(4, r), special.jvp(4, r, n=2), atol=1e-12)

    def test_three_term_recurrence(self):
        r = np.linspace(1.0, 100.0, 1000)
        table = bessel_j_table(51, r)
        for n in range(1, 51):
            residual = table[n - 1] + table[n + 1] - (2.0 * n / r) * table[n]
            assert np.max(np.abs(residual)) <= 2e-10, n

    @pytest.mark.parametrize("order", [0, 1, 3, 10])
    def test_derivatives_against_differences(self, order):
        r = np.linspace(1.5, 50.0, 120)
        h = 1e-5
        first = (bessel_j(order, r + h) - bessel_j(order, r - h)) / (2.0 * h)
        np.testing.assert_allclose(bessel_j_deriv(order, r), first, atol=1e-6)
        second = (bessel_j_deriv(order, r + h) - bessel_j_deriv(order, r - h)) / (2.0 * h)
        np.testing.assert_allclose(bessel_j_second_deriv(order, r), second, atol=1e-6)

    def test_reference_values(self):
        assert bessel_j(0, 3.831705) == pytest.approx(-0.402759, abs=1e-5)
        # J0' = -J1 is negative on (0, j_{1,1})
        assert bessel_j_deriv(0, 2.904825) == pytest.approx(-0.3737, abs=1e-4)
        assert abs(bessel_j_deriv(3, 2.637911)) == pytest.approx(0.187591, abs=1e-5)

    @pytest.mark.parametrize("order, r", [(513, 1.0), (-1, 1.0), (2.5, 1.0), (3, 100.5), (3, -0.1)])
    def test_envelope(self, order, r):
        with pytest.raises(EnvelopeError):
            bessel_j(order, r)

    def test_non_finite_argument(self):
        with pytest.raises(EnvelopeError):
            bessel_j_table(3, np.array([1.0, np.nan]))


class TestUpperGamma:
    @pytest.mark.parametrize("s", [-0.5, 0.0, 0.5, 1.0])
    @pytest.mark.parametrize("x", [0.01, 0.7, 5.0, 60.0, 650.0])
    def test_matches_mpmath(self, s, x):
        with mpmath.workdps(50):
            expected = float(mpmath.log10(mpmath.gammainc(s, x)))
        assert log_upper_gamma(s, x).log10_abs == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("s", [-0.5, 0.0, 0.5])
    @pytest.mark.parametrize("x", [800.0, 3000.0, 2.5e4])
    def test_asymptotic_branch(self, s, x):
        with mpmath.workdps(50):
            expected = float(mpmath.log10(mpmath.gammainc(s, x)))
        assert log_upper_gamma(s, x).log10_abs == pytest.approx(expected, abs=1e-9)
        assert upper_gamma_remainder(s, x) < 1e-6

    @pytest.mark.parametrize("s", [-0.5, 0.0, 0.5, 1.0])
    def test_strictly_decreasing(self, s):
        x = np.geomspace(0.05, 2000.0, 400)
        values = np.array([log_upper_gamma(s, v).log10_abs for v in x])
        assert np.all(np.diff(values) < 0.0)

    def test_remainder_above_tolerance_is_refused(self, monkeypatch):
        monkeypatch.setattr(specfun, "REMAINDER_TOLERANCE", 0.0)
        with pytest.raises(EnvelopeError):
            log_upper_gamma(0.5, 800.0)
        with pytest.raises(EnvelopeError):
            gaussian_deficit_tail(40.0)
        assert log_upper_gamma(0.5, 650.0).sign == 1

    def test_at_zero(self):
        assert log_upper_gamma(0.5, 0.0).to_float() == pytest.approx(math.sqrt(math.pi))
        assert log_upper_gamma(0.0, 0.0).log10_abs == math.inf
        assert log_upper_gamma(-0.5, 0.0).log10_abs == math.inf

    def test_unsupported(self):
        with pytest.raises(EnvelopeError):
            log_upper_gamma(2.0, 1.0)
        with pytest.raises(EnvelopeError):
            log_upper_gamma(0.5, -1.0)


class TestDeficitTail:
    @pytest.mark.parametrize("a", np.linspace(0.25, 8.0, 32).tolist())
    def test_matches_quadrature(self, a):
        value, _ = integrate.quad(lambda x: (1.0 - a / x) * math.exp(-0.5 * x * x), a, np.inf, epsabs=0,
                                  epsrel=1e-12)
        expected = 2.0 / math.sqrt(2.0 * math.pi) * value
        assert gaussian_deficit_tail(a).to_float() == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("a", [10.5, 40.0, 120.0])
    def test_large_threshold_matches_mpmath(self, a):
        with mpmath.workdps(80):
            t = mpmath.mpf(a) ** 2 / 2
            exact = 2 / mpmath.sqrt(2 * mpmath.pi) * (
                mpmath.gammainc(0.5, t) / mpmath.sqrt(2) - mpmath.mpf(a) / 2 * mpmath.gammainc(0, t))
            expected = float(mpmath.log10(exact))
        assert gaussian_deficit_tail(a).log10_abs == pytest.approx(expected, abs=1e-8)

    def test_zero_threshold(self):
        assert gaussian_deficit_tail(0.0).to_float() == 1.0

    def test_tail_is_decreasing(self):
        values = [gaussian_deficit_tail(a).log10_abs for a in (1.0, 5.0, 20.0, 80.0)]
        assert values == sorted(values, reverse=True)

    def test_appendix_form_exceeds_derived_form_for_large_threshold(self):
        a = 80.0
        assert appendix_deficit_tail(a).log10_abs > gaussian_deficit_tail(a).log10_abs

    def test_appendix_form_goes_negative_for_small_threshold(self):
        assert appendix_deficit_tail(0.05).sign == -1

    def test_rejects_negative(self):
        with pytest.raises(EnvelopeError):
            gaussian_deficit_tail(-1.0)
