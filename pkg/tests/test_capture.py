import math

import numpy as np
import pytest

from bounds.barrier import max_epsilon
from bounds.capture import (
    CaptureReport,
    PerturbationMode,
    approximation_margin,
    gradient_norm_ratio,
    random_perturbation,
    verify_zero_capture,
    zero_capture_margin,
)
from numerics.harmonic import HarmonicField
from numerics.rootfind import Interval, bessel_zero
from utils.errors import EnvelopeError

ANNULUS = Interval(bessel_zero(0, 1) - 0.5, bessel_zero(0, 1) + 0.5)


class TestMargins:
    def test_zero_capture_margin(self):
        assert zero_capture_margin(0.4, 0.1, 0.5) == pytest.approx(0.2)
        assert zero_capture_margin(0.4, -0.3, 0.5, direction_norm=1.0) < 0.0
        with pytest.raises(ValueError):
            zero_capture_margin(0.4, 0.1, 0.0)

    def test_approximation_margin_vanishes_at_max_epsilon(self):
        eps = max_epsilon(0.5, 1)
        assert approximation_margin(0.5, eps) == pytest.approx(0.0, abs=1e-12)
        assert approximation_margin(0.5, 0.95 * eps) > 0.0

    def test_approximation_margin_envelope(self):
        with pytest.raises(EnvelopeError):
            approximation_margin(3.0, 0.01)


class TestHarmonicNorm:
    def test_gradient_within_sqrt2_norm(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            field = random_perturbation(rng, ANNULUS, 1.0)
            assert gradient_norm_ratio(field, ANNULUS) <= math.sqrt(2.0) + 1e-12

    def test_scaled_perturbation_norm(self):
        field = random_perturbation(np.random.default_rng(3), ANNULUS, 0.05)
        assert field.polar_c1_norm(ANNULUS) == pytest.approx(0.05, rel=1e-12)

    def test_pure_j0(self):
        field = HarmonicField(np.array([1.0]), np.array([0.0]))
        value, d_r, d_theta = field.evaluate(np.array([bessel_zero(0, 1)]), np.array([0.3]))
        assert value[0] == pytest.approx(0.0, abs=1e-12)
        assert d_r[0] == pytest.approx(-0.5191474972894669, abs=1e-12)
        assert d_theta[0] == 0.0


class TestVerifyZeroCapture:
    def test_random_perturbations_captured(self):
        eps = max_epsilon(0.5, 1)
        report = verify_zero_capture(0.5, eps, trials=100, seed=11)
        assert report.hypotheses_satisfied
        assert report.failures == 0
        assert report.min_approximation_margin > 0.0
        assert all(t.max_root_offset <= 0.5 for t in report.trials)

    def test_zero_perturbation_on_circle(self):
        report = verify_zero_capture(0.5, 0.0, trials=1, seed=0)
        assert report.failures == 0
        assert report.trials[0].max_root_offset == pytest.approx(0.0, abs=1e-10)

    def test_large_constant_shift_fails(self):
        report = verify_zero_capture(0.5, 0.3, trials=2, mode=PerturbationMode.CONSTANT)
        assert not report.hypotheses_satisfied
        assert report.failures == 2 * 16

    def test_reproducible(self):
        first = verify_zero_capture(0.5, 0.05, trials=3, seed=5)
        second = verify_zero_capture(0.5, 0.05, trials=3, seed=5)
        assert first.to_dict() == second.to_dict()

    def test_round_trip(self):
        report = verify_zero_capture(0.5, 0.05, trials=2, seed=1)
        restored = CaptureReport.from_dict(report.to_dict())
        assert restored.to_dict() == report.to_dict()
