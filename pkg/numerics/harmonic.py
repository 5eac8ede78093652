"""
Fields of the form sum_n (a_n cos n theta + b_n sin n theta) J_n(r) and their polar C1 norm
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .rootfind import Interval
from .specfun import bessel_j_table


@dataclass(frozen=True)
class HarmonicField:
    """
    Coefficients a_0..a_K (cosine) and b_0..b_K (sine, b_0 unused) of a
    Helmholtz solution written in polar Fourier-Bessel form.
    """

    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.cos_coeffs, dtype=float)
        b = np.asarray(self.sin_coeffs, dtype=float)
        if a.ndim != 1 or a.shape != b.shape or a.size == 0:
            raise ValueError("cos_coeffs and sin_coeffs must be equal-length 1-D arrays")
        object.__setattr__(self, 'cos_coeffs', a)
        object.__setattr__(self, 'sin_coeffs', b)

    @property
    def max_order(self) -> int:
        return self.cos_coeffs.size - 1

    def scaled(self, factor: float) -> HarmonicField:
        return HarmonicField(self.cos_coeffs * factor, self.sin_coeffs * factor)

    def evaluate(self, r: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Value, radial derivative and angular derivative over r at broadcast (r, theta)

        The angular term uses n J_n / r = (J_{n-1} + J_{n+1}) / 2, so r = 0 is allowed.
        """
        r, theta = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
        K = self.max_order
        table = bessel_j_table(K + 1, r)

        value = np.zeros(r.shape)
        d_r = np.zeros(r.shape)
        d_theta = np.zeros(r.shape)
        for n in range(K + 1):
            a, b = self.cos_coeffs[n], self.sin_coeffs[n]
            if a == 0.0 and b == 0.0:
                continue
            c = np.cos(n * theta)
            s = np.sin(n * theta)
            angular = a * c + b * s
            value += angular * table[n]
            if n == 0:
                d_r += angular * -table[1]
                continue
            d_r += angular * 0.5 * (table[n - 1] - table[n + 1])
            d_theta += (-a * s + b * c) * 0.5 * (table[n - 1] + table[n + 1])
        return value, d_r, d_theta

    def polar_grid(self, annulus: Interval, n_r: int = 65, n_theta: int = 256) -> Tuple[np.ndarray, np.ndarray]:
        radii = np.linspace(annulus.lo, annulus.hi, n_r)
        angles = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
        return np.meshgrid(radii, angles, indexing='ij')

    def polar_c1_norm(self, annulus: Interval, n_r: int = 65, n_theta: int = 256) -> float:
        """sup over the annulus of max(|F|, |dF/dr|, |dF/dtheta| / r), sampled on a polar grid"""
        r, theta = self.polar_grid(annulus, n_r, n_theta)
        value, d_r, d_theta = self.evaluate(r, theta)
        return float(max(np.abs(value).max(), np.abs(d_r).max(), np.abs(d_theta).max()))

    def max_gradient(self, annulus: Interval, n_r: int = 65, n_theta: int = 256) -> float:
        r, theta = self.polar_grid(annulus, n_r, n_theta)
        _, d_r, d_theta = self.evaluate(r, theta)
        return float(np.sqrt(d_r ** 2 + d_theta ** 2).max())
