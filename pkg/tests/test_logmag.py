import math

import mpmath
import pytest

from numerics.logmag import LogMagnitude


class TestConstruction:
    def test_from_float_positive(self):
        value = LogMagnitude.from_float(2.5e-7)
        assert value.sign == 1
        assert value.log10_abs == pytest.approx(math.log10(2.5e-7))

    def test_zero_has_no_exponent(self):
        zero = LogMagnitude.from_float(0.0)
        assert zero.is_zero
        assert zero.log10_abs == -math.inf
        with pytest.raises(ValueError):
            zero.exponent()

    def test_minus_infinity_collapses_to_zero(self):
        assert LogMagnitude(1, -math.inf).sign == 0

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            LogMagnitude.from_float(float('nan'))
        with pytest.raises(ValueError):
            LogMagnitude(1, float('nan'))

    def test_from_ln(self):
        value = LogMagnitude.from_ln(-3000.0)
        assert value.log10_abs == pytest.approx(-3000.0 / math.log(10.0))

    def test_from_mpf_below_float_range(self):
        with mpmath.workdps(30):
            value = LogMagnitude.from_mpf(mpmath.mpf(10) ** -1500 * 3)
        assert value.sign == 1
        assert value.log10_abs == pytest.approx(-1500 + math.log10(3.0), abs=1e-12)


class TestArithmetic:
    def test_product_far_below_float_range(self):
        a = LogMagnitude(1, -900.0)
        b = LogMagnitude(-1, -400.5)
        product = a * b
        assert product.sign == -1
        assert product.log10_abs == pytest.approx(-1300.5)

    def test_sum_matches_float(self):
        a = LogMagnitude.from_float(3.0)
        b = LogMagnitude.from_float(4.5)
        assert (a + b).to_float() == pytest.approx(7.5)
        assert (a - b).to_float() == pytest.approx(-1.5)

    def test_exact_cancellation(self):
        a = LogMagnitude.from_float(1.25)
        assert (a - a).is_zero

    def test_division(self):
        value = LogMagnitude(1, -1280.0) / 4.0
        assert value.log10_abs == pytest.approx(-1280.0 - math.log10(4.0))
        with pytest.raises(ZeroDivisionError):
            value / LogMagnitude.zero()

    def test_ordering(self):
        values = [LogMagnitude(1, -5.0), LogMagnitude(-1, 2.0), LogMagnitude.zero(), LogMagnitude(1, 3.0)]
        assert sorted(values) == [LogMagnitude(-1, 2.0), LogMagnitude.zero(), LogMagnitude(1, -5.0),
                                  LogMagnitude(1, 3.0)]


class TestConversions:
    def test_mantissa_and_exponent(self):
        value = LogMagnitude.from_float(3.2724e-247)
        assert value.exponent() == -247
        assert value.mantissa() == pytest.approx(3.2724)

    def test_to_float_underflow_and_overflow(self):
        assert LogMagnitude(1, -1284.0).to_float() == 0.0
        assert LogMagnitude(-1, 400.0).to_float() == -math.inf

    def test_dict_round_trip(self):
        value = LogMagnitude(1, -4537.2)
        assert LogMagnitude.from_dict(value.to_dict()) == value
        assert LogMagnitude.from_dict(LogMagnitude.zero().to_dict()).is_zero

    def test_str(self):
        assert str(LogMagnitude.from_float(2.1186e-5)) == "2.1186e-5"
        assert str(LogMagnitude.zero()) == "0"
