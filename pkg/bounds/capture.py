"""
Zero-capture checks behind the barrier argument

A perturbation p with ||p||_A < eps keeps a zero of J0(r) + p within delta of the
circle r = j_{0,k}. verify_zero_capture exercises this on synthetic fields and
reports the capture criterion margins per trial.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from numerics.harmonic import HarmonicField
from numerics.rootfind import Interval, bessel_zero, find_root, level_band
from numerics.specfun import bessel_j
from utils.errors import BandUnboundedError, EnvelopeError
from .barrier import BarrierConfig, check_hypotheses, compute_bands, critical_gap
from .checklist import Target

logger = logging.getLogger(__name__)

FIELD_ORDER = 8
RAYS_PER_TRIAL = 16
NORM_FRACTION = 0.95
RAY_POINTS = 257


class PerturbationMode(str, Enum):
    RANDOM = "random"
    CONSTANT = "constant"


def zero_capture_margin(slope_inf: float, center_value: float, delta: float, direction_norm: float = 1.0) -> float:
    """
    inf |grad F . T| - |T| |F(x0)| / delta over B(x0, delta).

    A positive margin forces a zero of F inside the ball.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    return slope_inf - direction_norm * abs(center_value) / delta


def approximation_margin(delta: float, perturbation_norm: float, root_index: int = 1) -> float:
    """
    (delta/(1+delta)) inf |grad G . T| - sup ||F - G||_{C1} for G = J0 near j_{0,root_index}.

    The projection infimum is inf |J1| over the delta-interval times sqrt(1 - delta^2/j^2);
    the C1 distance is bounded by sqrt(2) ||p||_A.
    """
    j = bessel_zero(0, root_index)
    if not 0.0 < delta < j:
        raise EnvelopeError(f"delta must lie in (0, {j:.6f}), got {delta!r}")
    radii = np.linspace(j - delta, j + delta, 2049)
    slopes = np.asarray(bessel_j(1, radii))
    slope_inf = 0.0 if np.any(np.diff(np.sign(slopes)) != 0) else float(np.abs(slopes).min())
    projection_inf = slope_inf * math.sqrt(1.0 - (delta / j) ** 2)
    return delta / (1.0 + delta) * projection_inf - math.sqrt(2.0) * perturbation_norm


def gradient_norm_ratio(harmonic: HarmonicField, annulus: Interval, n_r: int = 65, n_theta: int = 256) -> float:
    """sup|grad F| / ||F||_A on a polar grid; at most sqrt 2"""
    norm = harmonic.polar_c1_norm(annulus, n_r, n_theta)
    if norm == 0.0:
        return 0.0
    return harmonic.max_gradient(annulus, n_r, n_theta) / norm


def random_perturbation(rng: np.random.Generator, annulus: Interval, target_norm: float,
                        order: int = FIELD_ORDER) -> HarmonicField:
    """Trigonometric-Bessel polynomial of degree `order` rescaled to ||p||_A = target_norm"""
    cos_coeffs = rng.standard_normal(order + 1)
    sin_coeffs = rng.standard_normal(order + 1)
    sin_coeffs[0] = 0.0
    raw = HarmonicField(cos_coeffs, sin_coeffs)
    if target_norm == 0.0:
        return raw.scaled(0.0)
    return raw.scaled(target_norm / raw.polar_c1_norm(annulus))


@dataclass
class TrialRecord:
    trial: int
    perturbation_norm: float
    failures: int
    min_zero_capture_margin: float
    approximation_margin: float
    max_root_offset: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trial": self.trial,
            "perturbation_norm": self.perturbation_norm,
            "failures": self.failures,
            "min_zero_capture_margin": self.min_zero_capture_margin,
            "approximation_margin": self.approximation_margin,
            "max_root_offset": self.max_root_offset,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> TrialRecord:
        return cls(
            trial=int(data["trial"]),
            perturbation_norm=float(data["perturbation_norm"]),
            failures=int(data["failures"]),
            min_zero_capture_margin=float(data["min_zero_capture_margin"]),
            approximation_margin=float(data["approximation_margin"]),
            max_root_offset=float(data["max_root_offset"]),
        )


@dataclass
class CaptureReport:
    delta: float
    epsilon: float
    root_index: int
    mode: PerturbationMode
    seed: int
    hypotheses_satisfied: bool
    trials: List[TrialRecord] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(t.failures for t in self.trials)

    @property
    def min_approximation_margin(self) -> float:
        return min((t.approximation_margin for t in self.trials), default=math.nan)

    @property
    def min_zero_capture_margin(self) -> float:
        return min((t.min_zero_capture_margin for t in self.trials), default=math.nan)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "epsilon": self.epsilon,
            "root_index": self.root_index,
            "mode": self.mode.value,
            "seed": self.seed,
            "hypotheses_satisfied": self.hypotheses_satisfied,
            "failures": self.failures,
            "trials": [t.to_dict() for t in self.trials],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> CaptureReport:
        return cls(
            delta=float(data["delta"]),
            epsilon=float(data["epsilon"]),
            root_index=int(data["root_index"]),
            mode=PerturbationMode(data["mode"]),
            seed=int(data["seed"]),
            hypotheses_satisfied=bool(data["hypotheses_satisfied"]),
            trials=[TrialRecord.from_dict(t) for t in data["trials"]],
        )


def _hypotheses_hold(delta: float, eps: float, root_index: int) -> bool:
    if not 0.0 < delta < critical_gap():
        return False
    if eps == 0.0:
        return True
    target = Target.MU0 if root_index == 1 else Target.MU1
    config = BarrierConfig(target=target, delta=delta, epsilon=eps)
    try:
        bands = compute_bands(target, eps)
    except BandUnboundedError:
        bands = None
    return check_hypotheses(config, bands, eps).passed


def _check_ray(profile_value: np.ndarray, profile_slope: np.ndarray, radii: np.ndarray,
               ray_function, j: float, delta: float, band: Optional[Interval]):
    """(captured, zero-capture margin, root offset) along one ray"""
    center = float(ray_function(j))
    margin = zero_capture_margin(float(np.abs(profile_slope).min()), center, delta)
    lo, hi = radii[0], radii[-1]
    if profile_value[0] * profile_value[-1] > 0.0:
        return False, margin, math.inf
    root = find_root(ray_function, Interval(float(lo), float(hi)))
    offset = abs(root - j)
    captured = offset <= delta and (band is None or band.contains(root))
    return captured, margin, offset


def verify_zero_capture(delta: float, eps: float, trials: int = 100, seed: int = 0,
                        mode: PerturbationMode = PerturbationMode.RANDOM, root_index: int = 1,
                        rays: int = RAYS_PER_TRIAL) -> CaptureReport:
    """
    Perturb J0 by synthetic fields p with ||p||_A = 0.95 eps (random mode) or by the
    constant eps (constant mode) and look for the zero of J0 + p along `rays` radial
    rays through the circle r = j_{0,root_index}.

    A ray fails when J0 + p has no sign change on [j - delta, j + delta] or the root
    leaves the level band. Never raises on capture failure; the count is reported.
    """
    mode = PerturbationMode(mode)
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps!r}")
    j = bessel_zero(0, root_index)
    annulus = Interval(j - delta, j + delta)
    hypotheses = _hypotheses_hold(delta, eps, root_index)
    if not hypotheses:
        logger.warning(f"(delta={delta}, eps={eps}) violates the capture hypotheses; failures are expected")

    try:
        band = level_band(eps, root_index) if eps > 0 and hypotheses else None
    except BandUnboundedError:
        band = None

    rng = np.random.default_rng(seed)
    radii = np.linspace(annulus.lo, annulus.hi, RAY_POINTS)
    angles = np.linspace(0.0, 2.0 * np.pi, rays, endpoint=False)
    base_value = np.asarray(bessel_j(0, radii))
    base_slope = -np.asarray(bessel_j(1, radii))

    report = CaptureReport(delta=delta, epsilon=eps, root_index=root_index, mode=mode, seed=seed,
                           hypotheses_satisfied=hypotheses)
    for trial in range(trials):
        if mode is PerturbationMode.CONSTANT:
            harmonic = None
            norm = eps
        else:
            harmonic = random_perturbation(rng, annulus, NORM_FRACTION * eps)
            norm = NORM_FRACTION * eps

        failures = 0
        margins: List[float] = []
        offsets: List[float] = []
        for theta in angles:
            if harmonic is None:
                value = base_value + eps
                slope = base_slope

                def ray_function(r: float) -> float:
                    return float(bessel_j(0, r)) + eps
            else:
                p_value, p_slope, _ = harmonic.evaluate(radii, np.full_like(radii, theta))
                value = base_value + p_value
                slope = base_slope + p_slope

                def ray_function(r: float, theta=theta, harmonic=harmonic) -> float:
                    p, _, _ = harmonic.evaluate(np.array([r]), np.array([theta]))
                    return float(bessel_j(0, r)) + float(p[0])

            captured, margin, offset = _check_ray(value, slope, radii, ray_function, j, delta, band)
            failures += 0 if captured else 1
            margins.append(margin)
            offsets.append(offset)

        record = TrialRecord(
            trial=trial,
            perturbation_norm=norm,
            failures=failures,
            min_zero_capture_margin=min(margins),
            approximation_margin=approximation_margin(delta, norm, root_index),
            max_root_offset=max(offsets),
        )
        if failures:
            logger.debug(f"Trial {trial}: {failures}/{rays} rays without a captured zero")
        report.trials.append(record)

    logger.info(f"Zero capture at delta={delta}, eps={eps} ({mode.value}): {report.failures} failures "
                f"over {trials} trials x {rays} rays")
    return report
