"""
Bracketed root solving, Bessel zeros, level bands of J0 and interval suprema
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from scipy import optimize

from utils.errors import BandUnboundedError, EnvelopeError, NoSignChangeError
from .specfun import bessel_j, bessel_j_orders, bessel_j_table

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
MAX_ZERO_INDEX = 20
GRID_POINTS = 2048


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise ValueError(f"Interval needs finite lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def to_list(self) -> list:
        return [float(self.lo), float(self.hi)]

    @classmethod
    def from_list(cls, values) -> Interval:
        lo, hi = values
        return cls(float(lo), float(hi))


class ExtremumKind(str, Enum):
    ABS_VALUE = "abs_value"
    ABS_DERIV = "abs_deriv"
    ABS_OVER_R = "abs_over_r"


@dataclass(frozen=True)
class ExtremumRecord:
    order: int
    kind: ExtremumKind
    argmax: float
    max_value: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "kind": self.kind.value,
            "argmax": float(self.argmax),
            "max_value": float(self.max_value),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> ExtremumRecord:
        return cls(int(data["order"]), ExtremumKind(data["kind"]), float(data["argmax"]), float(data["max_value"]))


# ==================== roots ====================

def find_root(f: Callable[[float], float], bracket: Interval, tol: float = DEFAULT_TOL) -> float:
    """
    Root of f inside a sign-changing bracket (Brent: bisection with inverse
    quadratic interpolation, bracket kept at every step)

    Raises:
        NoSignChangeError: f(lo) and f(hi) have the same sign
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    f_lo = float(f(bracket.lo))
    f_hi = float(f(bracket.hi))
    if f_lo == 0.0:
        return bracket.lo
    if f_hi == 0.0:
        return bracket.hi
    if not f_lo * f_hi < 0.0:
        raise NoSignChangeError(bracket.lo, bracket.hi, f_lo, f_hi)
    root = optimize.brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)
    return float(root)


@lru_cache(maxsize=None)
def bessel_zero(order: int, k: int) -> float:
    """
    k-th positive zero of J_order for order in {0, 1}, k <= 20

    Brackets come from McMahon's estimate (k + order/2 - 1/4) pi, accurate to well
    under the half-spacing of consecutive zeros.
    """
    if order not in (0, 1):
        raise EnvelopeError(f"zeros are supported for J0 and J1 only, got order {order!r}")
    if int(k) != k or not 1 <= k <= MAX_ZERO_INDEX:
        raise EnvelopeError(f"zero index must be an integer in [1, {MAX_ZERO_INDEX}], got {k!r}")
    guess = (k + 0.5 * order - 0.25) * math.pi
    return find_root(lambda r: bessel_j(order, r), Interval(guess - 1.0, guess + 1.0), tol=1e-14)


def j0_critical_point(k: int) -> float:
    """k-th critical point of J0 (0 for k = 0, else the k-th zero of J1)"""
    return 0.0 if k == 0 else bessel_zero(1, k)


# ==================== level bands ====================

def _band_sign(k: int) -> float:
    """Sign of J0 just inside the k-th zero, on the origin side"""
    return 1.0 if k % 2 == 1 else -1.0


def _check_band_cap(eps: float, critical_index: int) -> None:
    cap = abs(bessel_j(0, j0_critical_point(critical_index)))
    if not eps < cap:
        raise BandUnboundedError(
            f"eps={eps} reaches the critical value |J0| = {cap:.6f} at r = {j0_critical_point(critical_index):.6f}; "
            f"the band merges with its neighbour"
        )


def band_lower_edge(eps: float, k: int) -> float:
    """a_k(eps): inner endpoint of the component of {|J0| <= eps} around j_{0,k}"""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    _check_band_cap(eps, k - 1)
    sign = _band_sign(k)
    return find_root(lambda r: bessel_j(0, r) - sign * eps,
                     Interval(j0_critical_point(k - 1), bessel_zero(0, k)))


def band_upper_edge(eps: float, k: int) -> float:
    """b_k(eps): outer endpoint of the component of {|J0| <= eps} around j_{0,k}"""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    _check_band_cap(eps, k)
    sign = _band_sign(k)
    return find_root(lambda r: bessel_j(0, r) + sign * eps,
                     Interval(bessel_zero(0, k), j0_critical_point(k)))


def level_band(eps: float, k: int) -> Interval:
    """
    [a_k(eps), b_k(eps)], the connected component of {|J0(r)| <= eps} containing j_{0,k}

    Raises:
        BandUnboundedError: eps is not below both neighbouring critical values of |J0|
    """
    return Interval(band_lower_edge(eps, k), band_upper_edge(eps, k))


# ==================== interval suprema ====================

class ExtremumSearch:
    """
    Suprema of |J_n|, |J_n'| and |J_n / r| over one closed interval.

    One Bessel table over a dense grid serves every order up to max_order; an
    interior grid maximum is refined by solving for the zero of the derivative.
    """

    def __init__(self, interval: Interval, max_order: int, points: int = GRID_POINTS):
        if points < 3:
            raise ValueError("grid needs at least 3 points")
        self.interval = interval
        self.max_order = max_order
        self.grid = np.linspace(interval.lo, interval.hi, points)
        self._table = bessel_j_table(max_order + 2, self.grid)

    def _profile(self, kind: ExtremumKind, order: int) -> np.ndarray:
        table = self._table
        if kind is ExtremumKind.ABS_VALUE:
            return table[order]
        if kind is ExtremumKind.ABS_DERIV:
            return -table[1] if order == 0 else 0.5 * (table[order - 1] - table[order + 1])
        return table[order] / self.grid

    @staticmethod
    def _point_value(kind: ExtremumKind, order: int, x: float) -> float:
        j = bessel_j_orders(order + 1, x)
        if kind is ExtremumKind.ABS_VALUE:
            return float(j[order])
        if kind is ExtremumKind.ABS_DERIV:
            return float(-j[1] if order == 0 else 0.5 * (j[order - 1] - j[order + 1]))
        return float(j[order] / x)

    @staticmethod
    def _slope(kind: ExtremumKind, order: int, x: float) -> float:
        j = bessel_j_orders(order + 2, x)
        if kind is ExtremumKind.ABS_VALUE:
            return float(-j[1] if order == 0 else 0.5 * (j[order - 1] - j[order + 1]))
        if kind is ExtremumKind.ABS_DERIV:
            lower = order - 2
            j_lower = j[abs(lower)] * (-1.0 if lower < 0 and lower % 2 else 1.0)
            return float(0.25 * (j_lower - 2.0 * j[order] + j[order + 2]))
        # (J_n / r)' = (n - 1) J_n / r^2 - J_{n+1} / r
        return float((order - 1) * j[order] / (x * x) - j[order + 1] / x)

    def _refine(self, kind: ExtremumKind, order: int, lo: float, hi: float) -> Optional[Tuple[float, float]]:
        s_lo = self._slope(kind, order, lo)
        s_hi = self._slope(kind, order, hi)
        if not s_lo * s_hi < 0.0:
            return None
        root = find_root(lambda x: self._slope(kind, order, x), Interval(lo, hi), tol=1e-13)
        return root, abs(self._point_value(kind, order, root))

    def maximize(self, kind: ExtremumKind, order: int) -> ExtremumRecord:
        kind = ExtremumKind(kind)
        if not 0 <= order <= self.max_order:
            raise EnvelopeError(f"order {order} outside this search's range [0, {self.max_order}]")
        if kind is ExtremumKind.ABS_OVER_R and self.interval.lo <= 0.0:
            raise EnvelopeError("|J_n / r| needs an interval with lo > 0")

        values = np.abs(self._profile(kind, order))
        idx = int(np.argmax(values))
        best_x = float(self.grid[idx])
        best_value = float(values[idx])

        if 0 < idx < len(self.grid) - 1:
            refined = self._refine(kind, order, float(self.grid[idx - 1]), float(self.grid[idx + 1]))
            if refined is not None and refined[1] >= best_value:
                best_x, best_value = refined

        return ExtremumRecord(order=order, kind=kind, argmax=best_x, max_value=best_value)

    def local_maximize(self, kind: ExtremumKind, order: int) -> ExtremumRecord:
        """
        Largest interior local maximum, or the upper endpoint if that is larger.
        A supremum reached only at the lower endpoint is not seen here.
        """
        kind = ExtremumKind(kind)
        if not 0 <= order <= self.max_order:
            raise EnvelopeError(f"order {order} outside this search's range [0, {self.max_order}]")
        if kind is ExtremumKind.ABS_OVER_R and self.interval.lo <= 0.0:
            raise EnvelopeError("|J_n / r| needs an interval with lo > 0")

        values = np.abs(self._profile(kind, order))
        inner = values[1:-1]
        peaks = np.flatnonzero((inner >= values[:-2]) & (inner >= values[2:])) + 1
        best_x, best_value = float(self.grid[-1]), float(values[-1])
        for idx in peaks:
            refined = self._refine(kind, order, float(self.grid[idx - 1]), float(self.grid[idx + 1]))
            x, value = refined if refined is not None else (float(self.grid[idx]), float(values[idx]))
            if value > best_value:
                best_x, best_value = x, value
        return ExtremumRecord(order=order, kind=kind, argmax=best_x, max_value=best_value)


def interval_max(kind: ExtremumKind, order: int, interval: Interval) -> ExtremumRecord:
    """Supremum of |J_n|, |J_n'| or |J_n(r)/r| on the closed interval"""
    return ExtremumSearch(interval, order).maximize(kind, order)
