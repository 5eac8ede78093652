"""
Symmetrization lower bounds for mu(0) and mu(1)

Radial averaging around a point z turns F into F(z) J0(|x - z|); counting sign
changes of F on circles r_1 < ... < r_M then forces nested nodal lines. The bound
is sqrt(pi) q / r_M^2 with

    q = Γ(1/2, T²/2) - sqrt(1/2) sum_k r_k Γ(1/2, T²/(2 σ_k²)),  σ_k² = 1 - J0(r_k)²
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy import integrate, special

from numerics.logmag import LOG10_E, LogMagnitude
from numerics.rootfind import Interval, bessel_zero, find_root
from numerics.specfun import SQRT_HALF, SQRT_PI, bessel_j
from utils.errors import DegenerateError, EnvelopeError, HypothesisError, NoSignChangeError, NoSolutionError
from .barrier import SQRT_12, CnsConvention
from .checklist import HypothesisChecklist, Target

logger = logging.getLogger(__name__)

# relative closeness of the two tails below which float cancellation is not trusted
CANCELLATION_GUARD = 1e-12
EXTENDED_DPS = 60
T_BRACKET_SCALE = 5.0


class TMode(str, Enum):
    PROP_FORMULA = "prop_formula"
    APPENDIX_FORMULA = "appendix_formula"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class RadiiSchedule:
    radii: Tuple[float, ...]

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii:
            raise ValueError("radii schedule must not be empty")
        if radii[0] <= 0.0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError(f"radii must be positive and strictly increasing, got {radii}")
        for r in radii:
            if bessel_j(0, r) == 0.0:
                raise ValueError(f"J0 vanishes at radius {r}")
        object.__setattr__(self, 'radii', radii)

    @classmethod
    def single(cls, radius: float) -> RadiiSchedule:
        return cls((radius,))

    @classmethod
    def nested_limit(cls, count: int = 5) -> RadiiSchedule:
        """r_k = sqrt(k+1) j_{0,1}, k = 1..count: every area gap sits exactly at pi j_{0,1}^2"""
        j = bessel_zero(0, 1)
        return cls(tuple(math.sqrt(k + 1) * j for k in range(1, count + 1)))

    @property
    def outer(self) -> float:
        return self.radii[-1]

    @property
    def j0_values(self) -> np.ndarray:
        return np.asarray(bessel_j(0, np.asarray(self.radii)))

    @property
    def variances(self) -> np.ndarray:
        """σ_k² = 1 - J0(r_k)²"""
        return 1.0 - self.j0_values ** 2

    def __len__(self) -> int:
        return len(self.radii)

    def to_dict(self) -> Dict[str, Any]:
        return {"radii": list(self.radii)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> RadiiSchedule:
        return cls(tuple(float(r) for r in data["radii"]))


@dataclass
class SymmetrizationCertificate:
    schedule: RadiiSchedule
    target: Target
    T: float
    T_mode: TMode
    q: LogMagnitude
    log10_mu_bound: LogMagnitude
    mu_bounds: Dict[str, LogMagnitude]
    validation: HypothesisChecklist
    vacuous: bool
    extended_precision: bool = False
    quadrature_log10_q: Optional[float] = None
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schedule": self.schedule.to_dict(),
            "target": self.target.value,
            "T": self.T,
            "T_mode": self.T_mode.value,
            "q": self.q.to_dict(),
            "log10_mu_bound": self.log10_mu_bound.to_dict(),
            "mu_bounds": {k: v.to_dict() for k, v in sorted(self.mu_bounds.items())},
            "validation": self.validation.to_dict(),
            "vacuous": self.vacuous,
            "extended_precision": self.extended_precision,
            "quadrature_log10_q": self.quadrature_log10_q,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> SymmetrizationCertificate:
        quad = data.get("quadrature_log10_q")
        return cls(
            schedule=RadiiSchedule.from_dict(data["schedule"]),
            target=Target(data["target"]),
            T=float(data["T"]),
            T_mode=TMode(data["T_mode"]),
            q=LogMagnitude.from_dict(data["q"]),
            log10_mu_bound=LogMagnitude.from_dict(data["log10_mu_bound"]),
            mu_bounds={k: LogMagnitude.from_dict(v) for k, v in data["mu_bounds"].items()},
            validation=HypothesisChecklist.from_dict(data["validation"]),
            vacuous=bool(data["vacuous"]),
            extended_precision=bool(data.get("extended_precision", False)),
            quadrature_log10_q=None if quad is None else float(quad),
            warnings=list(data.get("warnings", [])),
        )


# ==================== radii ====================

def validate_radii(schedule: RadiiSchedule, target: Target) -> HypothesisChecklist:
    """
    Admissibility of the circles for the target; boundary equalities of the mu1
    constraints pass as limiting cases.
    """
    j1, j2, j3 = (bessel_zero(0, k) for k in (1, 2, 3))
    radii = schedule.radii
    checklist = HypothesisChecklist()

    checklist.require_less("first_radius_beyond_first_zero", j1, radii[0])
    if Target(target) is Target.MU0:
        checklist.require_less("first_radius_before_second_zero", radii[0], j2)
    else:
        checklist.require_less("first_radius_within_sqrt2_first_zero", radii[0], math.sqrt(2.0) * j1,
                               allow_limiting=True)
        checklist.require_less("last_radius_beyond_second_zero", j2, radii[-1])
        checklist.require_less("last_radius_before_third_zero", radii[-1], j3)
        for k in range(1, len(radii)):
            checklist.require_less(f"area_gap_{k}", radii[k] ** 2 - radii[k - 1] ** 2, j1 ** 2,
                                   allow_limiting=True)

    for warning in checklist.warnings():
        logger.warning(f"Radii schedule {warning}")
    return checklist


# ==================== Kac-Rice and T ====================

def kac_rice_expected_crossings(r: float, xi0: float) -> float:
    """
    Expected sign changes of F on the circle |x| = r given F(0) = xi0:
    sqrt(2) r / σ * exp(-xi0² J0(r)² / (2 σ²)), σ² = 1 - J0(r)²
    """
    j = float(bessel_j(0, r))
    variance = 1.0 - j * j
    if not variance > 0.0:
        raise DegenerateError(f"|J0({r})| = 1: the circle degenerates to a point")
    sigma = math.sqrt(variance)
    return math.sqrt(2.0) * r / sigma * math.exp(-(xi0 * j) ** 2 / (2.0 * variance))


def crossing_weight(schedule: RadiiSchedule, T: float, mode: TMode = TMode.PROP_FORMULA) -> float:
    """sqrt(1/2) sum_k w_k exp(-T² J0(r_k)² / (2 σ_k²)), w_k = r_k/σ_k (prop) or r_k (appendix)"""
    j = schedule.j0_values
    variance = schedule.variances
    radii = np.asarray(schedule.radii)
    weights = radii if TMode(mode) is TMode.APPENDIX_FORMULA else radii / np.sqrt(variance)
    return float(SQRT_HALF * np.sum(weights * np.exp(-T * T * j * j / (2.0 * variance))))


def closed_form_T(radius: float, mode: TMode = TMode.PROP_FORMULA) -> float:
    """Single-radius T solving 1 = crossing_weight: T² = (1/J0² - 1) log(r² / (2 σ^2)) (σ² dropped in appendix mode)"""
    j = float(bessel_j(0, radius))
    variance = 1.0 - j * j
    scale = variance if TMode(mode) is TMode.PROP_FORMULA else 1.0
    log_term = math.log(radius * radius / (2.0 * scale))
    if not log_term > 0.0:
        raise NoSolutionError(f"no positive T at r={radius}: crossing weight never exceeds 1")
    return math.sqrt((1.0 / (j * j) - 1.0) * log_term)


def optimal_T(schedule: RadiiSchedule, mode: TMode = TMode.PROP_FORMULA,
              explicit_T: Optional[float] = None) -> float:
    """
    Zero of 1 - crossing_weight(T) on [0, 5 / min|J0(r_k)|]

    Raises:
        NoSolutionError: the expression has no zero in the bracket
    """
    mode = TMode(mode)
    if mode is TMode.EXPLICIT:
        if explicit_T is None or not explicit_T > 0:
            raise ValueError(f"explicit mode needs a positive T, got {explicit_T!r}")
        return float(explicit_T)

    t_max = T_BRACKET_SCALE / float(np.abs(schedule.j0_values).min())
    try:
        T = find_root(lambda t: 1.0 - crossing_weight(schedule, t, mode), Interval(0.0, t_max))
    except NoSignChangeError as e:
        raise NoSolutionError(f"optimal T ({mode.value}) has no zero in [0, {t_max:.4f}]: {e}") from e
    logger.info(f"Optimal T ({mode.value}) for {len(schedule)} radii: {T:.6f}")
    return T


# ==================== q and the bound ====================

def _extended_q(schedule: RadiiSchedule, T: float) -> LogMagnitude:
    with mpmath.workdps(EXTENDED_DPS):
        x0 = mpmath.mpf(T) ** 2 / 2
        total = mpmath.gammainc(mpmath.mpf('0.5'), x0)
        for r, variance in zip(schedule.radii, schedule.variances):
            total -= mpmath.sqrt(mpmath.mpf('0.5')) * r * mpmath.gammainc(mpmath.mpf('0.5'), x0 / variance)
        return LogMagnitude.from_mpf(total)


def q_value(schedule: RadiiSchedule, T: float) -> Tuple[LogMagnitude, bool]:
    """
    q as a LogMagnitude, plus whether extended precision was needed.

    Both tails carry the common factor e^(-T²/2); what remains is a difference of
    erfcx values, recomputed with mpmath when it cancels to within the guard.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T!r}")
    x0 = 0.5 * T * T
    first = float(special.erfcx(math.sqrt(x0)))
    second = 0.0
    for r, variance in zip(schedule.radii, schedule.variances):
        xk = x0 / variance
        second += SQRT_HALF * r * float(special.erfcx(math.sqrt(xk))) * math.exp(-(xk - x0))
    difference = first - second
    if abs(difference) < CANCELLATION_GUARD * max(first, second):
        logger.debug(f"q cancels at T={T}; recomputing at {EXTENDED_DPS} digits")
        return _extended_q(schedule, T), True
    scaled = LogMagnitude.from_float(SQRT_PI * difference)
    return scaled * LogMagnitude(1, -x0 * LOG10_E), False


def quadrature_bound(schedule: RadiiSchedule, T: float) -> LogMagnitude:
    """
    q from direct quadrature of sqrt(2) ∫_T^∞ e^(-t²/2) (1 - crossing_weight(t)) dt,
    with e^(-T²/2) factored out so large T stays representable
    """
    def integrand(u: float) -> float:
        return (1.0 - crossing_weight(schedule, T + u)) * math.exp(-T * u - 0.5 * u * u)

    # the integrand decays like e^(-T u); past this point it is below float resolution
    upper = min(40.0 / T, 10.0)
    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-11, limit=200)
    return LogMagnitude.from_float(math.sqrt(2.0) * value) * LogMagnitude(1, -0.5 * T * T * LOG10_E)


def symmetrization_bound(schedule: RadiiSchedule, T: float, target: Target = Target.MU0,
                         T_mode: TMode = TMode.EXPLICIT) -> SymmetrizationCertificate:
    """
    sqrt(pi) q / r_M^2, valid for every T > 0; also the explicit-c_NS forms for both conventions

    Raises:
        HypothesisError: the radii fail validation
    """
    target = Target(target)
    validation = validate_radii(schedule, target)
    if not validation.passed:
        raise HypothesisError(validation.failed(), f"{target.value} radii schedule", checklist=validation)
    if not T > 0:
        raise EnvelopeError(f"T must be positive, got {T!r}")

    q, extended = q_value(schedule, T)
    area = schedule.outer ** 2
    bound = q * SQRT_PI / area
    mu_bounds = {
        convention.value: q * (convention.inverse_cns / (SQRT_12 * SQRT_PI)) / area
        for convention in CnsConvention
    }

    quad = quadrature_bound(schedule, T)
    quad_log10 = quad.log10_abs if quad.sign > 0 else None
    vacuous = q.sign <= 0
    warnings = validation.warnings()
    if vacuous:
        warnings.append(f"q <= 0 at T={T}: bound is vacuous")
        logger.warning(f"Symmetrization bound vacuous at T={T:.6f} ({target.value})")
    else:
        logger.info(f"{target.value} symmetrization: T={T:.6f}, log10 q={q.log10_abs:.4f}, "
                    f"mu >= {bound}")

    return SymmetrizationCertificate(
        schedule=schedule,
        target=target,
        T=float(T),
        T_mode=TMode(T_mode),
        q=q,
        log10_mu_bound=bound,
        mu_bounds=mu_bounds,
        validation=validation,
        vacuous=vacuous,
        extended_precision=extended,
        quadrature_log10_q=quad_log10,
        warnings=warnings,
    )


def symmetrization_certificate(schedule: RadiiSchedule, target: Target, mode: TMode = TMode.PROP_FORMULA,
                               explicit_T: Optional[float] = None) -> SymmetrizationCertificate:
    """Validate, solve for T in the given mode and evaluate the bound"""
    T = optimal_T(schedule, mode, explicit_T)
    return symmetrization_bound(schedule, T, target, T_mode=mode)


def bound_profile(schedule: RadiiSchedule, T_values: Sequence[float]) -> List[LogMagnitude]:
    """sqrt(pi) q / r_M^2 over a grid of T, without validation"""
    area = schedule.outer ** 2
    return [q_value(schedule, float(T))[0] * SQRT_PI / area for T in T_values]
