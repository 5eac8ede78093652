"""
Barrier-method lower bounds for mu(0) and mu(1)

The wave is forced to stay C1-close to xi0 * J0(r) on an annulus; the level
bands of J0 then trap one (mu0) or two (mu1) nodal lines.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from numerics.logmag import LogMagnitude
from numerics.rootfind import (
    ExtremumKind,
    ExtremumSearch,
    Interval,
    band_lower_edge,
    bessel_zero,
    level_band,
)
from numerics.specfun import (
    MAX_ORDER,
    MAX_RADIUS,
    SQRT_PI,
    appendix_deficit_tail,
    bessel_j,
    gaussian_deficit_tail,
)
from utils.errors import BandUnboundedError, EnvelopeError, HypothesisError
from .checklist import HypothesisChecklist, Target

logger = logging.getLogger(__name__)

# c_NS <= 1/(2 pi sqrt 3) from the Kac-Rice count; packing density of disks pi/sqrt(12)
CNS_UPPER_BOUND = 1.0 / (2.0 * math.pi * math.sqrt(3.0))
PACKING_DENSITY = math.pi / math.sqrt(12.0)
SQRT_12 = math.sqrt(12.0)
# orders the published mu(1) table lists one by one; the mu(0) tally matches the certified sum
TABULATED_ORDERS = {Target.MU0: 0, Target.MU1: 6}


class CnsConvention(str, Enum):
    KAC_RICE_EXACT = "kac_rice_exact"
    FACTOR_TEN = "factor_ten"

    @property
    def inverse_cns(self) -> float:
        """Lower bound for 1 / c_NS under this convention"""
        if self is CnsConvention.KAC_RICE_EXACT:
            return 1.0 / CNS_UPPER_BOUND
        return 10.0


@dataclass(frozen=True)
class BarrierConfig:
    target: Target = Target.MU0
    delta: float = 0.5
    epsilon: Optional[float] = None  # None selects the largest admissible value
    truncation_order: int = 100
    cns_convention: CnsConvention = CnsConvention.KAC_RICE_EXACT

    def __post_init__(self):
        object.__setattr__(self, 'target', Target(self.target))
        object.__setattr__(self, 'cns_convention', CnsConvention(self.cns_convention))
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta!r}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive or None, got {self.epsilon!r}")
        if self.truncation_order < 10:
            raise ValueError(f"truncation order must be >= 10, got {self.truncation_order}")

    @property
    def epsilon_is_auto(self) -> bool:
        return self.epsilon is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target.value,
            "delta": self.delta,
            "epsilon": self.epsilon,
            "truncation_order": self.truncation_order,
            "cns_convention": self.cns_convention.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> BarrierConfig:
        return cls(
            target=Target(data["target"]),
            delta=float(data["delta"]),
            epsilon=None if data.get("epsilon") is None else float(data["epsilon"]),
            truncation_order=int(data["truncation_order"]),
            cns_convention=CnsConvention(data["cns_convention"]),
        )


@dataclass(frozen=True)
class OrderContribution:
    """sup|J_n|, sup|J_n'| and n*sup|J_n/r| over the annulus, with their arguments"""

    order: int
    sup_value: float
    sup_deriv: float
    weighted_sup_over_r: float
    argmax_value: float
    argmax_deriv: float
    argmax_over_r: float
    # |J_n/r| at its largest interior critical point (or the outer edge), unweighted
    tabulated_over_r: Optional[float] = None
    argmax_tabulated_over_r: Optional[float] = None

    @property
    def total(self) -> float:
        return self.sup_value + self.sup_deriv + self.weighted_sup_over_r

    @property
    def tabulated_total(self) -> Optional[float]:
        if self.tabulated_over_r is None:
            return None
        return self.sup_value + self.sup_deriv + self.tabulated_over_r

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "sup_value": self.sup_value,
            "sup_deriv": self.sup_deriv,
            "weighted_sup_over_r": self.weighted_sup_over_r,
            "argmax_value": self.argmax_value,
            "argmax_deriv": self.argmax_deriv,
            "argmax_over_r": self.argmax_over_r,
            "tabulated_over_r": self.tabulated_over_r,
            "argmax_tabulated_over_r": self.argmax_tabulated_over_r,
            "total": self.total,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> OrderContribution:
        return cls(
            **{key: data[key] for key in (
                "order", "sup_value", "sup_deriv", "weighted_sup_over_r",
                "argmax_value", "argmax_deriv", "argmax_over_r")},
            tabulated_over_r=data.get("tabulated_over_r"),
            argmax_tabulated_over_r=data.get("argmax_tabulated_over_r"),
        )


@dataclass
class SAccumulation:
    inner: float
    outer: float
    truncation_order: int
    per_order: List[OrderContribution]
    partial_sum: float
    tail_bound: float

    @property
    def certified_S_upper(self) -> float:
        return self.partial_sum + self.tail_bound

    def contribution(self, order: int) -> OrderContribution:
        return self.per_order[order - 1]

    def block_sum(self, first: int) -> float:
        """sum of S_n for n >= first, tail included"""
        return math.fsum(c.total for c in self.per_order if c.order >= first) + self.tail_bound

    @property
    def tabulated_through(self) -> int:
        return sum(1 for c in self.per_order if c.tabulated_over_r is not None)

    @property
    def tabulated_S(self) -> Optional[float]:
        """
        S tallied as the published mu(1) table does: for the tabulated orders the
        |J_n/r| term is unweighted and read at a critical point. Not an upper bound.
        """
        through = self.tabulated_through
        if through == 0:
            return None
        head = math.fsum(c.tabulated_total for c in self.per_order[:through])
        return head + self.block_sum(through + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inner": self.inner,
            "outer": self.outer,
            "truncation_order": self.truncation_order,
            "per_order": [c.to_dict() for c in self.per_order],
            "partial_sum": self.partial_sum,
            "tail_bound": self.tail_bound,
            "certified_S_upper": self.certified_S_upper,
            "tabulated_S": self.tabulated_S,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> SAccumulation:
        return cls(
            inner=float(data["inner"]),
            outer=float(data["outer"]),
            truncation_order=int(data["truncation_order"]),
            per_order=[OrderContribution.from_dict(c) for c in data["per_order"]],
            partial_sum=float(data["partial_sum"]),
            tail_bound=float(data["tail_bound"]),
        )


@dataclass
class LevelBands:
    """[a_k, b_k] for the bands a target needs, plus a_3 for mu1"""

    bands: Dict[int, Interval] = field(default_factory=dict)
    third_lower_edge: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bands": {str(k): band.to_list() for k, band in sorted(self.bands.items())},
            "third_lower_edge": self.third_lower_edge,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> LevelBands:
        edge = data.get("third_lower_edge")
        return cls(
            bands={int(k): Interval.from_list(v) for k, v in data["bands"].items()},
            third_lower_edge=None if edge is None else float(edge),
        )


@dataclass
class BarrierCertificate:
    config: BarrierConfig
    epsilon: float
    annulus: Interval
    bands: LevelBands
    S: SAccumulation
    checklist: HypothesisChecklist
    tail_threshold: float
    log10_probability: LogMagnitude
    log10_prefactor: LogMagnitude
    log10_mu_bound: LogMagnitude
    mu_bounds: Dict[str, LogMagnitude]
    appendix_log10_probability: LogMagnitude
    tabulated_log10_probability: Optional[LogMagnitude] = None

    @property
    def appendix_gap(self) -> float:
        """log10(appendix-form value) - log10(derived value)"""
        return self.appendix_log10_probability.log10_abs - self.log10_probability.log10_abs

    def bound_columns(self) -> Dict[str, LogMagnitude]:
        """log10 mu under each tail form and S tally, with the configured prefactor"""
        columns = {
            "certified S, Γ(0) form": self.log10_mu_bound,
            "certified S, Γ(-1/2) form": self.appendix_log10_probability * self.log10_prefactor,
        }
        if self.tabulated_log10_probability is not None:
            columns["tabulated S, Γ(-1/2) form"] = self.tabulated_log10_probability * self.log10_prefactor
        return columns

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "epsilon": self.epsilon,
            "annulus": self.annulus.to_list(),
            "bands": self.bands.to_dict(),
            "S": self.S.to_dict(),
            "checklist": self.checklist.to_dict(),
            "tail_threshold": self.tail_threshold,
            "log10_probability": self.log10_probability.to_dict(),
            "log10_prefactor": self.log10_prefactor.to_dict(),
            "log10_mu_bound": self.log10_mu_bound.to_dict(),
            "mu_bounds": {k: v.to_dict() for k, v in sorted(self.mu_bounds.items())},
            "appendix_log10_probability": self.appendix_log10_probability.to_dict(),
            "appendix_gap": self.appendix_gap,
            "tabulated_log10_probability": (None if self.tabulated_log10_probability is None
                                            else self.tabulated_log10_probability.to_dict()),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> BarrierCertificate:
        return cls(
            config=BarrierConfig.from_dict(data["config"]),
            epsilon=float(data["epsilon"]),
            annulus=Interval.from_list(data["annulus"]),
            bands=LevelBands.from_dict(data["bands"]),
            S=SAccumulation.from_dict(data["S"]),
            checklist=HypothesisChecklist.from_dict(data["checklist"]),
            tail_threshold=float(data["tail_threshold"]),
            log10_probability=LogMagnitude.from_dict(data["log10_probability"]),
            log10_prefactor=LogMagnitude.from_dict(data["log10_prefactor"]),
            log10_mu_bound=LogMagnitude.from_dict(data["log10_mu_bound"]),
            mu_bounds={k: LogMagnitude.from_dict(v) for k, v in data["mu_bounds"].items()},
            appendix_log10_probability=LogMagnitude.from_dict(data["appendix_log10_probability"]),
            tabulated_log10_probability=(None if data.get("tabulated_log10_probability") is None
                                         else LogMagnitude.from_dict(data["tabulated_log10_probability"])),
        )


# ==================== epsilon ====================

def critical_gap() -> float:
    """j_{1,1} - j_{0,1}: the largest admissible delta"""
    return bessel_zero(1, 1) - bessel_zero(0, 1)


def critical_value(root_index: int) -> float:
    """|J0| at the critical point just beyond the root_index-th zero"""
    return abs(bessel_j(0, bessel_zero(1, root_index)))


def _capture_epsilon(delta: float, root_index: int) -> float:
    j = bessel_zero(0, root_index)
    radii = np.linspace(j - delta, j + delta, 2049)
    slopes = bessel_j(1, radii)
    # |J0'| = |J1| has no interior minimum between zeros of J1
    slope_inf = 0.0 if np.any(np.diff(np.sign(slopes)) != 0) else float(np.abs(slopes).min())
    return math.sqrt(0.5) * delta / (1.0 + delta) * math.sqrt(1.0 - (delta / j) ** 2) * slope_inf


def max_epsilon(delta: float, root_index: int) -> float:
    """
    (1/sqrt 2) (delta/(1+delta)) sqrt(1 - delta^2/j^2) inf_{|r-j|<=delta} |J0'(r)|, j = j_{0,root_index},
    capped by the critical value |J0(j_{1,root_index})|

    Raises:
        EnvelopeError: delta outside (0, j_{1,1} - j_{0,1}) or root_index not in {1, 2}
    """
    if root_index not in (1, 2):
        raise EnvelopeError(f"root_index must be 1 or 2, got {root_index!r}")
    gap = critical_gap()
    if not 0.0 < delta < gap:
        raise EnvelopeError(f"delta must lie in (0, {gap:.5f}), got {delta!r}")
    return min(_capture_epsilon(delta, root_index), critical_value(root_index))


def epsilon_limit(target: Target, delta: float) -> float:
    """Largest eps the target's hypotheses allow at this delta"""
    if Target(target) is Target.MU0:
        return max_epsilon(delta, 1)
    return min(max_epsilon(delta, 1), max_epsilon(delta, 2))


def resolve_epsilon(config: BarrierConfig) -> float:
    if config.epsilon is not None:
        return config.epsilon
    eps = epsilon_limit(config.target, config.delta)
    logger.info(f"Auto epsilon for {config.target.value} at delta={config.delta}: {eps:.6f}")
    return eps


# ==================== bands and hypotheses ====================

def barrier_annulus(target: Target, delta: float) -> Interval:
    outer_root = 1 if Target(target) is Target.MU0 else 2
    return Interval(bessel_zero(0, 1) - delta, bessel_zero(0, outer_root) + delta)


def compute_bands(target: Target, eps: float) -> LevelBands:
    """Level bands the target's checks need; raises BandUnboundedError"""
    if Target(target) is Target.MU0:
        return LevelBands(bands={1: level_band(eps, 1)})
    return LevelBands(bands={1: level_band(eps, 1), 2: level_band(eps, 2)},
                      third_lower_edge=band_lower_edge(eps, 3))


def check_hypotheses(config: BarrierConfig, bands: Optional[LevelBands],
                     epsilon: Optional[float] = None) -> HypothesisChecklist:
    """
    Every constraint of the target's barrier argument, with margins; never raises.

    bands may be None when eps is too large for the bands to exist; the band
    checks are then recorded as failed.
    """
    delta = config.delta
    if epsilon is None:
        epsilon = config.epsilon
    if epsilon is None:
        try:
            epsilon = epsilon_limit(config.target, delta)
        except EnvelopeError:
            epsilon = math.nan

    j1 = bessel_zero(0, 1)
    j2 = bessel_zero(0, 2)
    nan = math.nan
    band1 = bands.bands.get(1) if bands else None
    band2 = bands.bands.get(2) if bands else None
    unbounded_note = "" if bands else "band unbounded at this eps"

    checklist = HypothesisChecklist()
    checklist.require_less("delta_below_critical_gap", delta, critical_gap())

    if config.target is Target.MU0:
        checklist.require_less("epsilon_below_critical_value", epsilon, critical_value(1))
        checklist.require_less("epsilon_within_capture_bound", epsilon, _capture_epsilon(delta, 1), strict=False)
        checklist.require_less("band_inner_edge_inside_annulus", j1 - delta, band1.lo if band1 else nan,
                               note=unbounded_note)
        checklist.require_less("band_outer_edge_inside_annulus", band1.hi if band1 else nan, j1 + delta,
                               note=unbounded_note)
        return checklist

    checklist.require_less("epsilon_below_second_critical_value", epsilon, critical_value(2))
    checklist.require_less("epsilon_within_first_capture_bound", epsilon, _capture_epsilon(delta, 1), strict=False)
    checklist.require_less("epsilon_within_second_capture_bound", epsilon, _capture_epsilon(delta, 2), strict=False)

    a3 = bands.third_lower_edge if bands and bands.third_lower_edge is not None else nan
    checklist.require_less("delta_below_first_band_gap", delta, band2.lo - j1 if band2 else nan, note=unbounded_note)
    checklist.require_less("delta_below_second_band_gap", delta, j2 - band1.hi if band1 else nan, note=unbounded_note)
    checklist.require_less("delta_below_third_band_gap", delta, a3 - j2, note=unbounded_note)
    checklist.require_less("first_band_area", band1.hi ** 2 - band1.lo ** 2 if band1 else nan, j1 ** 2,
                           note=unbounded_note)
    checklist.require_less("second_band_area", band2.hi ** 2 - band2.lo ** 2 if band2 else nan, j1 ** 2,
                           note=unbounded_note)
    return checklist


# ==================== S ====================

def tail_bound(outer: float, truncation_order: int) -> float:
    """
    Bound on sum_{n>N} (sup|J_n| + sup|J_n'| + n sup|J_n/r|) over r <= outer.

    Each summand is at most B_{n-1} + B_n + B_{n+1} with B_m = (outer/2)^m / m!, so the
    tail is at most 3 B_N / (1 - q), q = (outer/2) / (N+1).
    """
    half = 0.5 * outer
    q = half / (truncation_order + 1)
    if not q < 1.0:
        raise EnvelopeError(f"truncation order {truncation_order} too small for outer radius {outer}")
    log_b = truncation_order * math.log(half) - math.lgamma(truncation_order + 1)
    return 3.0 * math.exp(log_b) / (1.0 - q)


def compute_S(inner: float, outer: float, truncation_order: int = 100, tabulated_through: int = 0) -> SAccumulation:
    """
    Certified upper bound for S = sum_{n>=1} (sup|J_n| + sup|J_n'| + n sup|J_n/r|) on [inner, outer]

    Orders up to tabulated_through also record |J_n/r| at its critical point,
    which is what the published mu(1) table tallies.

    Raises:
        EnvelopeError: radii or truncation outside the Bessel envelope
    """
    if not 0.0 < inner < outer <= MAX_RADIUS:
        raise EnvelopeError(f"need 0 < inner < outer <= {MAX_RADIUS}, got ({inner}, {outer})")
    if not 10 <= truncation_order <= MAX_ORDER - 2:
        raise EnvelopeError(f"truncation order must lie in [10, {MAX_ORDER - 2}], got {truncation_order}")

    search = ExtremumSearch(Interval(inner, outer), truncation_order)
    per_order: List[OrderContribution] = []
    for n in range(1, truncation_order + 1):
        value = search.maximize(ExtremumKind.ABS_VALUE, n)
        deriv = search.maximize(ExtremumKind.ABS_DERIV, n)
        over_r = search.maximize(ExtremumKind.ABS_OVER_R, n)
        tabulated = search.local_maximize(ExtremumKind.ABS_OVER_R, n) if n <= tabulated_through else None
        contribution = OrderContribution(
            order=n,
            sup_value=value.max_value,
            sup_deriv=deriv.max_value,
            weighted_sup_over_r=n * over_r.max_value,
            argmax_value=value.argmax,
            argmax_deriv=deriv.argmax,
            argmax_over_r=over_r.argmax,
            tabulated_over_r=None if tabulated is None else tabulated.max_value,
            argmax_tabulated_over_r=None if tabulated is None else tabulated.argmax,
        )
        per_order.append(contribution)
        if n <= 8:
            logger.debug(f"S_{n} = {contribution.total:.6f} (u={value.argmax:.4f}, v={over_r.argmax:.4f}, w={deriv.argmax:.4f})")

    partial = math.fsum(c.total for c in per_order)
    tail = tail_bound(outer, truncation_order)
    logger.info(f"S on [{inner:.6f}, {outer:.6f}] with N={truncation_order}: partial={partial:.6f}, tail={tail:.3e}")
    return SAccumulation(inner=inner, outer=outer, truncation_order=truncation_order,
                         per_order=per_order, partial_sum=partial, tail_bound=tail)


# ==================== probability and mu ====================

def tail_threshold(S: float, eps: float) -> float:
    """sqrt(pi) S / eps, the Gaussian threshold |xi0| must exceed"""
    return SQRT_PI * S / eps


def probability_lower_bound(S: float, eps: float) -> LogMagnitude:
    """Lower bound for P(||p||_A < eps |xi0|)"""
    if not S > 0 or not eps > 0:
        raise ValueError(f"S and eps must be positive, got S={S!r}, eps={eps!r}")
    return gaussian_deficit_tail(tail_threshold(S, eps))


def barrier_prefactor(target: Target, delta: float, convention: CnsConvention) -> LogMagnitude:
    """(1/c_NS) / ((j + delta)^2 sqrt 12), j the outermost trapped zero"""
    outer_root = 1 if Target(target) is Target.MU0 else 2
    radius = bessel_zero(0, outer_root) + delta
    return LogMagnitude.from_float(CnsConvention(convention).inverse_cns / (radius ** 2 * SQRT_12))


def mu_lower_bound(config: BarrierConfig) -> BarrierCertificate:
    """
    Full barrier pipeline: epsilon, bands, hypothesis checks, S, probability and mu bound

    Raises:
        HypothesisError: a check failed; the error carries the checklist
    """
    eps = resolve_epsilon(config)
    try:
        bands: Optional[LevelBands] = compute_bands(config.target, eps)
    except BandUnboundedError as e:
        logger.warning(f"Level bands unavailable: {e}")
        bands = None

    checklist = check_hypotheses(config, bands, eps)
    if not checklist.passed:
        for name in checklist.failed():
            item = checklist.get(name)
            logger.error(f"Check failed: {name} (lhs={item.lhs:.6g}, rhs={item.rhs:.6g}, margin={item.margin:.3e})")
        raise HypothesisError(checklist.failed(), f"{config.target.value} barrier hypotheses", checklist=checklist)

    annulus = barrier_annulus(config.target, config.delta)
    S = compute_S(annulus.lo, annulus.hi, config.truncation_order, TABULATED_ORDERS[config.target])
    threshold = tail_threshold(S.certified_S_upper, eps)
    probability = gaussian_deficit_tail(threshold)
    appendix = appendix_deficit_tail(threshold)
    tabulated = None
    if S.tabulated_S is not None:
        tabulated = appendix_deficit_tail(tail_threshold(S.tabulated_S, eps))
        logger.info(f"{config.target.value}: tabulated S = {S.tabulated_S:.6f} against certified "
                    f"{S.certified_S_upper:.6f}; Γ(-1/2) form gives log10 P = {tabulated.log10_abs:.4f}")

    mu_bounds = {
        convention.value: probability * barrier_prefactor(config.target, config.delta, convention)
        for convention in CnsConvention
    }
    prefactor = barrier_prefactor(config.target, config.delta, config.cns_convention)
    bound = probability * prefactor
    logger.info(f"{config.target.value}: log10 P >= {probability.log10_abs:.4f}, log10 mu >= {bound.log10_abs:.4f} "
                f"({config.cns_convention.value}); Γ(-1/2) form gives log10 P = {appendix.log10_abs:.4f}")

    return BarrierCertificate(
        config=config,
        epsilon=eps,
        annulus=annulus,
        bands=bands,
        S=S,
        checklist=checklist,
        tail_threshold=threshold,
        log10_probability=probability,
        log10_prefactor=prefactor,
        log10_mu_bound=bound,
        mu_bounds=mu_bounds,
        appendix_log10_probability=appendix,
        tabulated_log10_probability=tabulated,
    )
