import math

import numpy as np
import pytest

from bounds.symmetrize import kac_rice_expected_crossings
from numerics.specfun import bessel_j_orders
from simulation.crossings import (
    MIN_ANGLES,
    CrossingStats,
    circle_crossings,
    circle_values,
    count_sign_changes,
)
from simulation.wave import evaluate_points, sample_wave

RADIUS = 3.8317
J01 = 2.404825557695773


class TestCircleValues:
    def test_matches_direct_series(self):
        sample = sample_wave(40, seed=11)
        j_values = bessel_j_orders(40, RADIUS)
        values = circle_values(sample.coefficient_vector()[None, :], j_values, sample.xi0, MIN_ANGLES)[0]
        theta = 2.0 * np.pi * np.arange(MIN_ANGLES) / MIN_ANGLES
        points = np.column_stack([RADIUS * np.cos(theta), RADIUS * np.sin(theta)])
        np.testing.assert_allclose(values, evaluate_points(sample, points), atol=1e-10)

    def test_zero_oscillation_is_constant(self):
        j_values = bessel_j_orders(20, RADIUS)
        values = circle_values(np.zeros((1, 41)), j_values, 1.5, MIN_ANGLES)[0]
        np.testing.assert_allclose(values, 1.5 * j_values[0], atol=1e-14)
        assert count_sign_changes(values) == 0


class TestCountSignChanges:
    def test_cyclic(self):
        assert count_sign_changes(np.array([1.0, -1.0, -2.0, 3.0])) == 2
        assert count_sign_changes(np.array([[1.0, 2.0], [-1.0, -1.0]])).tolist() == [0, 0]

    def test_always_even(self):
        values = np.random.default_rng(0).standard_normal((50, 31))
        assert np.all(count_sign_changes(values) % 2 == 0)


class TestCircleCrossings:
    @pytest.mark.parametrize("radius, xi0", [(RADIUS, 0.0), (RADIUS, 2.0), (J01, 1.0)])
    def test_kac_rice_mean(self, radius, xi0):
        stats = circle_crossings(radius, xi0, n_samples=10000, n_terms=60, seed=123)
        expected = kac_rice_expected_crossings(radius, xi0)
        assert abs(stats.mean - expected) < 3.0 * stats.std_error
        assert stats.even_fraction == 1.0

    def test_first_zero_ignores_xi0(self):
        # J0 vanishes on the circle, so F(0) carries no information there
        expected = kac_rice_expected_crossings(J01, 1.0)
        assert expected == pytest.approx(3.4009, abs=1e-4)
        assert expected == pytest.approx(kac_rice_expected_crossings(J01, 0.0))

    def test_dominant_mean_leaves_no_zeros(self):
        # F(0) = 50 swamps the unit-variance oscillation on a small circle
        stats = circle_crossings(0.5, 50.0, n_samples=50, n_terms=20, seed=1)
        assert stats.mean == 0.0

    def test_reproducible(self):
        first = circle_crossings(RADIUS, 0.0, n_samples=100, n_terms=30, seed=5)
        second = circle_crossings(RADIUS, 0.0, n_samples=100, n_terms=30, seed=5)
        assert first.to_dict() == second.to_dict()
        assert CrossingStats.from_dict(first.to_dict()) == first

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            circle_crossings(RADIUS, 0.0, n_samples=10, angles=1024)
        with pytest.raises(ValueError):
            circle_crossings(RADIUS, 0.0, n_samples=1)
        with pytest.raises(ValueError):
            circle_crossings(RADIUS, 0.0, n_samples=10, n_terms=2048, angles=MIN_ANGLES)
