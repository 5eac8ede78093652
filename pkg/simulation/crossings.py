"""
Sign changes of the wave along a circle, as a Monte Carlo check of the
Kac-Rice crossing count
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from numerics.specfun import bessel_j_orders
from .wave import SQRT_2, sample_wave

logger = logging.getLogger(__name__)

MIN_ANGLES = 4096
SAMPLE_CHUNK = 1024


@dataclass
class CrossingStats:
    radius: float
    xi0: float
    n_samples: int
    n_terms: int
    seed: int
    angles: int
    mean: float
    std_error: float
    even_fraction: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "radius": self.radius,
            "xi0": self.xi0,
            "n_samples": self.n_samples,
            "n_terms": self.n_terms,
            "seed": self.seed,
            "angles": self.angles,
            "mean": self.mean,
            "std_error": self.std_error,
            "even_fraction": self.even_fraction,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> CrossingStats:
        return cls(
            radius=float(data["radius"]),
            xi0=float(data["xi0"]),
            n_samples=int(data["n_samples"]),
            n_terms=int(data["n_terms"]),
            seed=int(data["seed"]),
            angles=int(data["angles"]),
            mean=float(data["mean"]),
            std_error=float(data["std_error"]),
            even_fraction=float(data["even_fraction"]),
        )


def circle_values(coefficients: np.ndarray, j_values: np.ndarray, xi0: float, angles: int) -> np.ndarray:
    """
    F(r, theta_m) at theta_m = 2 pi m / angles for a batch of coefficient vectors.

    The oscillatory part is an inverse real FFT with c_n = sqrt2 J_n(r) (xi_n - i eta_n) M/2.
    """
    n_terms = j_values.size - 1
    spectrum = np.zeros((coefficients.shape[0], angles // 2 + 1), dtype=complex)
    weights = SQRT_2 * j_values[1:] * (angles / 2.0)
    spectrum[:, 1:n_terms + 1] = weights * (coefficients[:, 1::2] - 1j * coefficients[:, 2::2])
    return np.fft.irfft(spectrum, n=angles, axis=-1) + xi0 * j_values[0]


def count_sign_changes(values: np.ndarray) -> np.ndarray:
    """Cyclic sign changes along the last axis"""
    negative = np.signbit(values)
    return np.count_nonzero(negative != np.roll(negative, -1, axis=-1), axis=-1)


def circle_crossings(radius: float, xi0: float, n_samples: int = 10000, n_terms: int = 100,
                     seed: int = 0, angles: int = MIN_ANGLES) -> CrossingStats:
    """Mean number of zeros of F on |x| = radius with F(0) fixed at xi0"""
    if angles < MIN_ANGLES:
        raise ValueError(f"need at least {MIN_ANGLES} angles, got {angles}")
    if 2 * n_terms >= angles:
        raise ValueError(f"{n_terms} terms alias on {angles} angles")
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a standard error")

    j_values = bessel_j_orders(n_terms, radius)
    counts = np.empty(n_samples, dtype=int)
    for start in range(0, n_samples, SAMPLE_CHUNK):
        stop = min(start + SAMPLE_CHUNK, n_samples)
        coefficients = np.stack([
            sample_wave(n_terms, seed, xi0_override=xi0, sample_index=i).coefficient_vector()
            for i in range(start, stop)
        ])
        counts[start:stop] = count_sign_changes(circle_values(coefficients, j_values, xi0, angles))

    stats = CrossingStats(
        radius=float(radius),
        xi0=float(xi0),
        n_samples=n_samples,
        n_terms=n_terms,
        seed=seed,
        angles=angles,
        mean=float(counts.mean()),
        std_error=float(counts.std(ddof=1) / math.sqrt(n_samples)),
        even_fraction=float(np.mean(counts % 2 == 0)),
    )
    logger.info(f"Circle r={radius:.4f}, xi0={xi0}: {stats.mean:.4f} +/- {stats.std_error:.4f} crossings "
                f"over {n_samples} samples")
    return stats
