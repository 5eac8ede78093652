"""
Truncated random plane wave: coefficient sampling and field evaluation

F(x) = xi0 J0(r) + sqrt(2) sum_{n=1}^{N} (xi_n cos n theta + eta_n sin n theta) J_n(r)
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from numerics.specfun import MAX_ORDER, bessel_j_table
from utils.errors import EnvelopeError

logger = logging.getLogger(__name__)

SQRT_2 = math.sqrt(2.0)
MIN_RESOLUTION = 64
# points per basis chunk; bounds the (N+1) x chunk Bessel table
CHUNK_POINTS = 16384


@dataclass(frozen=True)
class WaveSample:
    """
    One draw of the truncated wave. xi and eta hold orders 1..n_terms; the raw
    normal stream is interleaved (xi0, xi_1, eta_1, xi_2, eta_2, ...) so a shorter
    truncation is a prefix of a longer one.
    """

    xi0: float
    xi: np.ndarray
    eta: np.ndarray
    n_terms: int
    seed: int
    sample_index: int = 0
    xi0_override: Optional[float] = None

    def coefficient_vector(self) -> np.ndarray:
        """(xi0, xi_1, eta_1, ..., xi_N, eta_N), matching FieldBasis rows"""
        vector = np.empty(2 * self.n_terms + 1)
        vector[0] = self.xi0
        vector[1::2] = self.xi
        vector[2::2] = self.eta
        return vector

    def to_dict(self) -> Dict[str, Any]:
        return {
            "xi0": self.xi0,
            "xi": self.xi.tolist(),
            "eta": self.eta.tolist(),
            "n_terms": self.n_terms,
            "seed": self.seed,
            "sample_index": self.sample_index,
            "xi0_override": self.xi0_override,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> WaveSample:
        override = data.get("xi0_override")
        return cls(
            xi0=float(data["xi0"]),
            xi=np.asarray(data["xi"], dtype=float),
            eta=np.asarray(data["eta"], dtype=float),
            n_terms=int(data["n_terms"]),
            seed=int(data["seed"]),
            sample_index=int(data.get("sample_index", 0)),
            xi0_override=None if override is None else float(override),
        )


def sample_generator(seed: int, sample_index: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by (seed, sample_index)"""
    if seed < 0 or sample_index < 0:
        raise ValueError(f"seed and sample index must be nonnegative, got ({seed}, {sample_index})")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(sample_index)])))


def sample_wave(n_terms: int, seed: int, xi0_override: Optional[float] = None, sample_index: int = 0) -> WaveSample:
    """Draw xi0 and (xi_n, eta_n), n = 1..n_terms, as independent standard normals"""
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    if n_terms > MAX_ORDER - 1:
        raise EnvelopeError(f"n_terms must be at most {MAX_ORDER - 1}, got {n_terms}")
    z = sample_generator(seed, sample_index).standard_normal(2 * n_terms + 1)
    xi0 = float(z[0]) if xi0_override is None else float(xi0_override)
    return WaveSample(
        xi0=xi0,
        xi=z[1::2].copy(),
        eta=z[2::2].copy(),
        n_terms=n_terms,
        seed=seed,
        sample_index=sample_index,
        xi0_override=xi0_override,
    )


@dataclass(frozen=True)
class GridSpec:
    half_width: float = 20.0
    resolution: int = 500
    counting_radius: Optional[float] = None  # None means 0.9 * half_width

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width!r}")
        if self.resolution < MIN_RESOLUTION:
            raise ValueError(f"resolution must be >= {MIN_RESOLUTION}, got {self.resolution}")
        if self.counting_radius is None:
            object.__setattr__(self, 'counting_radius', 0.9 * self.half_width)
        if not 0.0 < self.counting_radius < self.half_width:
            raise ValueError(f"counting radius must lie in (0, {self.half_width}), got {self.counting_radius!r}")

    @property
    def coords(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.resolution)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.resolution - 1)

    @property
    def cell_area(self) -> float:
        return self.spacing ** 2

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """X, Y with X[i, j] = coords[j] and Y[i, j] = coords[i]"""
        return np.meshgrid(self.coords, self.coords, indexing='xy')

    def radii(self) -> np.ndarray:
        X, Y = self.mesh()
        return np.hypot(X, Y)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "half_width": self.half_width,
            "resolution": self.resolution,
            "counting_radius": self.counting_radius,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> GridSpec:
        return cls(float(data["half_width"]), int(data["resolution"]), float(data["counting_radius"]))


def basis_rows(n_terms: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Rows J0, sqrt2 cos(n theta) J_n, sqrt2 sin(n theta) J_n for n = 1..n_terms at flat points

    Returns:
        Array of shape (2 n_terms + 1, len(x)) ordered like WaveSample.coefficient_vector
    """
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    table = bessel_j_table(n_terms, r)
    orders = np.arange(1, n_terms + 1)[:, None]
    angles = orders * theta[None, :]
    rows = np.empty((2 * n_terms + 1, r.size))
    rows[0] = table[0]
    rows[1::2] = SQRT_2 * np.cos(angles) * table[1:]
    rows[2::2] = SQRT_2 * np.sin(angles) * table[1:]
    return rows


def evaluate_points(sample: WaveSample, points: np.ndarray) -> np.ndarray:
    """F at arbitrary (x, y) points, shape (P, 2)"""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[-1] != 2:
        raise ValueError(f"points must have shape (P, 2), got {points.shape}")
    vector = sample.coefficient_vector()
    out = np.empty(points.shape[0])
    for start in range(0, points.shape[0], CHUNK_POINTS):
        chunk = points[start:start + CHUNK_POINTS]
        out[start:start + CHUNK_POINTS] = vector @ basis_rows(sample.n_terms, chunk[:, 0], chunk[:, 1])
    return out


def evaluate_field(sample: WaveSample, grid: GridSpec) -> np.ndarray:
    """
    F on the grid in float64, rows indexed by y and columns by x

    Raises:
        EnvelopeError: grid corners beyond the Bessel envelope
    """
    X, Y = grid.mesh()
    points = np.column_stack([X.ravel(), Y.ravel()])
    return evaluate_points(sample, points).reshape(X.shape)


class FieldBasis:
    """
    Cached basis matrix for one (grid, n_terms): each sample costs one
    vector-matrix product. float32 storage keeps a 500^2 x 201 basis near 200 MB.
    """

    def __init__(self, grid: GridSpec, n_terms: int, dtype=np.float32):
        self.grid = grid
        self.n_terms = n_terms
        X, Y = grid.mesh()
        x = X.ravel()
        y = Y.ravel()
        self.matrix = np.empty((2 * n_terms + 1, x.size), dtype=dtype)
        for start in range(0, x.size, CHUNK_POINTS):
            stop = start + CHUNK_POINTS
            self.matrix[:, start:stop] = basis_rows(n_terms, x[start:stop], y[start:stop])
        logger.debug(f"Field basis built: {self.matrix.shape[0]} x {self.matrix.shape[1]} ({self.matrix.nbytes / 1e6:.1f} MB)")

    def evaluate(self, sample: WaveSample) -> np.ndarray:
        if sample.n_terms != self.n_terms:
            raise ValueError(f"sample has {sample.n_terms} terms, basis has {self.n_terms}")
        vector = sample.coefficient_vector().astype(self.matrix.dtype)
        res = self.grid.resolution
        return (vector @ self.matrix).reshape(res, res)


@dataclass(frozen=True)
class CovarianceEstimate:
    first: Tuple[float, float]
    second: Tuple[float, float]
    separation: float
    mean_product: float
    std_error: float
    target: float

    @property
    def z_score(self) -> float:
        return (self.mean_product - self.target) / self.std_error if self.std_error > 0 else math.inf

    def to_dict(self) -> Dict[str, Any]:
        return {
            "first": list(self.first),
            "second": list(self.second),
            "separation": self.separation,
            "mean_product": self.mean_product,
            "std_error": self.std_error,
            "target": self.target,
        }


def empirical_covariance(pairs: Sequence[Tuple[Tuple[float, float], Tuple[float, float]]], n_samples: int,
                         n_terms: int = 100, seed: int = 0) -> List[CovarianceEstimate]:
    """Monte Carlo E[F(x) F(y)] per point pair, with the J0(|x - y|) target"""
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    points = np.array([p for pair in pairs for p in pair], dtype=float)
    basis = np.column_stack([basis_rows(n_terms, points[i:i + 1, 0], points[i:i + 1, 1])[:, 0]
                             for i in range(points.shape[0])])
    products = np.empty((n_samples, len(pairs)))
    for index in range(n_samples):
        values = sample_wave(n_terms, seed, sample_index=index).coefficient_vector() @ basis
        products[index] = values[0::2] * values[1::2]

    estimates = []
    for k, (first, second) in enumerate(pairs):
        separation = math.dist(first, second)
        estimates.append(CovarianceEstimate(
            first=tuple(first),
            second=tuple(second),
            separation=separation,
            mean_product=float(products[:, k].mean()),
            std_error=float(products[:, k].std(ddof=1) / math.sqrt(n_samples)),
            target=float(bessel_j_table(0, separation)[0]),
        ))
    return estimates
