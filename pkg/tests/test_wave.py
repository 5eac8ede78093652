import math

import numpy as np
import pytest
from scipy import special

from numerics.specfun import bessel_j
from simulation.wave import (
    FieldBasis,
    GridSpec,
    WaveSample,
    empirical_covariance,
    evaluate_field,
    evaluate_points,
    sample_wave,
)
from utils.errors import EnvelopeError

J01 = 2.404825557695773


def _pure_j0(n_terms: int = 5) -> WaveSample:
    return WaveSample(xi0=1.0, xi=np.zeros(n_terms), eta=np.zeros(n_terms), n_terms=n_terms, seed=0)


class TestSampleWave:
    def test_reproducible(self):
        first = sample_wave(50, seed=42, sample_index=7)
        second = sample_wave(50, seed=42, sample_index=7)
        np.testing.assert_array_equal(first.coefficient_vector(), second.coefficient_vector())

    def test_streams_differ_by_index(self):
        assert not np.array_equal(sample_wave(10, 42, sample_index=0).xi, sample_wave(10, 42, sample_index=1).xi)

    def test_shorter_truncation_is_prefix(self):
        short = sample_wave(5, seed=1).coefficient_vector()
        long = sample_wave(12, seed=1).coefficient_vector()
        np.testing.assert_array_equal(short, long[:short.size])

    def test_override(self):
        sample = sample_wave(10, seed=9, xi0_override=5.0)
        assert sample.xi0 == 5.0
        assert sample.xi0_override == 5.0

    def test_standard_normal_moments(self):
        n = 10000
        draws = np.stack([sample_wave(3, seed=2024, sample_index=i).coefficient_vector() for i in range(n)])
        assert np.all(np.abs(draws.mean(axis=0)) < 4.0 / math.sqrt(n))
        # Var of the sample variance of N(0,1) is 2/(n-1)
        assert np.all(np.abs(draws.var(axis=0, ddof=1) - 1.0) < 4.0 * math.sqrt(2.0 / (n - 1)))

    def test_limits(self):
        with pytest.raises(ValueError):
            sample_wave(0, seed=1)
        with pytest.raises(EnvelopeError):
            sample_wave(600, seed=1)

    def test_round_trip(self):
        sample = sample_wave(4, seed=3, xi0_override=-1.5, sample_index=2)
        restored = WaveSample.from_dict(sample.to_dict())
        np.testing.assert_array_equal(restored.coefficient_vector(), sample.coefficient_vector())
        assert restored.sample_index == 2 and restored.xi0_override == -1.5


class TestGridSpec:
    def test_default_counting_radius(self):
        grid = GridSpec(half_width=20.0, resolution=500)
        assert grid.counting_radius == pytest.approx(18.0)
        assert grid.spacing == pytest.approx(40.0 / 499)

    @pytest.mark.parametrize("kwargs", [
        {"half_width": 0.0},
        {"resolution": 32},
        {"half_width": 10.0, "counting_radius": 10.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GridSpec(**kwargs)

    def test_mesh_orientation(self):
        grid = GridSpec(half_width=1.0, resolution=64)
        X, Y = grid.mesh()
        assert X[0, -1] == pytest.approx(1.0) and Y[0, -1] == pytest.approx(-1.0)
        assert Y[-1, 0] == pytest.approx(1.0)


class TestEvaluate:
    def test_pure_j0(self, small_grid):
        field = evaluate_field(_pure_j0(), small_grid)
        np.testing.assert_allclose(field, bessel_j(0, small_grid.radii()), atol=1e-12)

    def test_series_at_points(self):
        sample = sample_wave(8, seed=5)
        points = np.array([[0.0, 0.0], [1.5, -2.0], [-3.0, 4.0], [6.0, 0.5]])
        r = np.hypot(points[:, 0], points[:, 1])
        theta = np.arctan2(points[:, 1], points[:, 0])
        expected = sample.xi0 * special.jv(0, r)
        for n in range(1, 9):
            angular = sample.xi[n - 1] * np.cos(n * theta) + sample.eta[n - 1] * np.sin(n * theta)
            expected += math.sqrt(2.0) * angular * special.jv(n, r)
        np.testing.assert_allclose(evaluate_points(sample, points), expected, atol=1e-11)

    def test_basis_matches_direct_evaluation(self, small_grid):
        sample = sample_wave(30, seed=8)
        basis = FieldBasis(small_grid, 30)
        np.testing.assert_allclose(basis.evaluate(sample), evaluate_field(sample, small_grid), atol=1e-4)

    def test_basis_rejects_other_truncation(self, small_grid):
        basis = FieldBasis(small_grid, 10)
        with pytest.raises(ValueError):
            basis.evaluate(sample_wave(11, seed=0))

    def test_grid_beyond_envelope(self):
        with pytest.raises(EnvelopeError):
            evaluate_field(_pure_j0(), GridSpec(half_width=75.0, resolution=64))

    def test_origin_value_is_xi0(self):
        sample = sample_wave(20, seed=4)
        assert evaluate_points(sample, np.array([[0.0, 0.0]]))[0] == pytest.approx(sample.xi0, abs=1e-12)


class TestCovariance:
    def test_matches_j0_of_separation(self):
        pairs = [
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 1.0), (1.0, 1.0 + J01)),
            ((-2.0, 0.5), (1.0, 4.5)),
        ]
        estimates = empirical_covariance(pairs, n_samples=2000, n_terms=60, seed=17)
        assert [e.separation for e in estimates] == pytest.approx([1.0, J01, 5.0])
        assert estimates[1].target == pytest.approx(0.0, abs=1e-12)
        for estimate in estimates:
            assert abs(estimate.z_score) < 3.0
