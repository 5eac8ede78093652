"""
Bessel functions of the first kind and log-domain incomplete-gamma / Gaussian-tail primitives
"""
import logging
import math
from typing import Tuple, Union

import numpy as np
from scipy import special

from utils.errors import EnvelopeError
from .logmag import LOG10_E, LogMagnitude

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# accuracy envelope: absolute error <= 1e-12 for order <= 512, 0 <= r <= 100
MAX_ORDER = 512
MAX_RADIUS = 100.0

# below this radius every order is summed from the ascending series
SERIES_RADIUS = 1.0
SERIES_TERMS = 24

_RESCALE_THRESHOLD = 1e250
_RESCALE_FACTOR = 1e-250

SQRT_PI = math.sqrt(math.pi)
SQRT_HALF = math.sqrt(0.5)
GAUSS_TWO_SIDED = 2.0 / math.sqrt(2.0 * math.pi)

GAMMA_ORDERS = (-0.5, 0.0, 0.5, 1.0)
ASYMPTOTIC_THRESHOLD = 700.0
DEFICIT_ASYMPTOTIC_THRESHOLD = 10.0
_ASYMPTOTIC_MAX_TERMS = 400
_ASYMPTOTIC_CUTOFF = 1e-17
# relative remainder an asymptotic sum may leave before the value is refused
REMAINDER_TOLERANCE = 1e-8


# ==================== Bessel J_n ====================

def _check_envelope(nmax: int, r: np.ndarray) -> None:
    if int(nmax) != nmax or nmax < 0 or nmax > MAX_ORDER:
        raise EnvelopeError(f"Bessel order must be an integer in [0, {MAX_ORDER}], got {nmax!r}")
    if r.size == 0:
        return
    if not np.all(np.isfinite(r)):
        raise EnvelopeError("Bessel argument must be finite")
    if r.min() < 0.0 or r.max() > MAX_RADIUS:
        raise EnvelopeError(f"Bessel argument must lie in [0, {MAX_RADIUS}], got range [{r.min()}, {r.max()}]")


def _series_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (n+k)!) for every order at once"""
    orders = np.arange(nmax + 1, dtype=float)[:, None]
    half = 0.5 * x[None, :]
    with np.errstate(divide='ignore', under='ignore'):
        term = np.exp(orders * np.log(half) - special.gammaln(orders + 1.0))
    total = term.copy()
    quarter = half * half
    for k in range(1, SERIES_TERMS + 1):
        term = -term * quarter / (k * (orders + k))
        total += term
    return total


def _miller_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Backward recurrence from well above max(nmax, x), normalized by J0 + 2*sum J_2k = 1"""
    top = max(nmax, int(math.ceil(float(x.max()))))
    start = top + int(math.sqrt(160.0 * max(top, 1))) + 16

    table = np.empty((nmax + 1, x.size))
    two_over_x = 2.0 / x
    j_above = np.zeros_like(x)
    j_here = np.ones_like(x)
    norm = np.zeros_like(x)

    for k in range(start, 0, -1):
        if k <= nmax:
            table[k] = j_here
        if k % 2 == 0:
            norm += 2.0 * j_here
        j_below = k * two_over_x * j_here - j_above
        j_above, j_here = j_here, j_below

        big = np.abs(j_here) > _RESCALE_THRESHOLD
        if big.any():
            j_here[big] *= _RESCALE_FACTOR
            j_above[big] *= _RESCALE_FACTOR
            norm[big] *= _RESCALE_FACTOR
            table[k:, big] *= _RESCALE_FACTOR

    table[0] = j_here
    norm += j_here
    table /= norm
    return table


def bessel_j_table(nmax: int, r: ArrayLike) -> np.ndarray:
    """
    J_0(r), ..., J_nmax(r) at every radius

    Args:
        nmax: Highest order, at most MAX_ORDER
        r: Radius or array of radii in [0, MAX_RADIUS]

    Returns:
        Array of shape (nmax + 1,) + shape(r)
    """
    r_arr = np.asarray(r, dtype=float)
    _check_envelope(nmax, r_arr)
    flat = r_arr.ravel()
    out = np.zeros((nmax + 1, flat.size))

    at_origin = flat == 0.0
    small = (flat > 0.0) & (flat < SERIES_RADIUS)
    large = flat >= SERIES_RADIUS
    out[0, at_origin] = 1.0
    if small.any():
        out[:, small] = _series_table(nmax, flat[small])
    if large.any():
        out[:, large] = _miller_table(nmax, flat[large])
    return out.reshape((nmax + 1,) + r_arr.shape)


def bessel_j_orders(nmax: int, r: float) -> np.ndarray:
    """J_0(r) ... J_nmax(r) at a single radius as a 1-D array"""
    return bessel_j_table(nmax, np.array([float(r)]))[:, 0]


def _scalar_or_array(values: np.ndarray, r: ArrayLike) -> ArrayLike:
    if np.ndim(r) == 0:
        return float(values.reshape(()))
    return values


def bessel_j(order: int, r: ArrayLike) -> ArrayLike:
    """J_order(r); raises EnvelopeError outside order <= 512, 0 <= r <= 100"""
    table = bessel_j_table(order, r)
    return _scalar_or_array(table[order], r)


def bessel_j_deriv(order: int, r: ArrayLike) -> ArrayLike:
    """
    J_order'(r) from the recurrence (J_{n-1} - J_{n+1}) / 2, with J_0' = -J_1
    """
    if order + 1 > MAX_ORDER:
        raise EnvelopeError(f"derivative needs order {order + 1}, above {MAX_ORDER}")
    table = bessel_j_table(order + 1, r)
    if order == 0:
        values = -table[1]
    else:
        values = 0.5 * (table[order - 1] - table[order + 1])
    return _scalar_or_array(values, r)


def bessel_j_second_deriv(order: int, r: ArrayLike) -> ArrayLike:
    """J_order''(r) = (J_{n-2} - 2 J_n + J_{n+2}) / 4 with J_{-m} = (-1)^m J_m"""
    table = bessel_j_table(order + 2, r)
    lower = order - 2
    j_lower = table[abs(lower)] * (-1.0 if lower < 0 and lower % 2 else 1.0)
    values = 0.25 * (j_lower - 2.0 * table[order] + table[order + 2])
    return _scalar_or_array(values, r)


# ==================== incomplete gamma Γ(s, x) ====================

def _check_remainder(relative: float, what: str) -> None:
    if not relative <= REMAINDER_TOLERANCE:
        raise EnvelopeError(f"asymptotic series for {what} leaves relative remainder {relative:.3e}, "
                            f"above {REMAINDER_TOLERANCE:.0e}")


def _asymptotic_upper_gamma(s: float, x: float) -> Tuple[float, float]:
    """
    log10 Γ(s, x) from x^(s-1) e^(-x) sum_k (s-1)(s-2)...(s-k) / x^k.

    For s < 1 the terms alternate and the first omitted term bounds the remainder;
    returns (log10 value, relative remainder bound).
    """
    total = 1.0
    term = 1.0
    remainder = 0.0
    for k in range(1, _ASYMPTOTIC_MAX_TERMS):
        candidate = term * (s - k) / x
        if abs(candidate) >= abs(term) or abs(candidate) < _ASYMPTOTIC_CUTOFF:
            remainder = abs(candidate)
            break
        total += candidate
        term = candidate
    log10_value = (s - 1.0) * math.log10(x) - x * LOG10_E + math.log10(total)
    return log10_value, remainder / total


def log_upper_gamma(s: float, x: float) -> LogMagnitude:
    """
    Upper incomplete gamma Γ(s, x) for s in {-1/2, 0, 1/2, 1} as a LogMagnitude.

    x <= 700 uses scipy's scaled complementary error function and exponential
    integral; beyond that the enveloping asymptotic series is summed in log domain.
    Γ(0, 0) and Γ(-1/2, 0) are +inf.

    Raises:
        EnvelopeError: unsupported s, bad x, or a series remainder above REMAINDER_TOLERANCE
    """
    if s not in GAMMA_ORDERS:
        raise EnvelopeError(f"unsupported incomplete-gamma order s={s!r}; expected one of {GAMMA_ORDERS}")
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise EnvelopeError(f"incomplete-gamma argument must be finite and >= 0, got {x!r}")

    if s == 1.0:
        return LogMagnitude(1, -x * LOG10_E)
    if x == 0.0:
        if s == 0.5:
            return LogMagnitude.from_float(SQRT_PI)
        return LogMagnitude(1, math.inf)

    if x > ASYMPTOTIC_THRESHOLD:
        log10_value, remainder = _asymptotic_upper_gamma(s, x)
        _check_remainder(remainder, f"Γ({s}, {x})")
        return LogMagnitude(1, log10_value)

    root = math.sqrt(x)
    if s == 0.5:
        scaled = SQRT_PI * float(special.erfcx(root))
        return LogMagnitude(1, math.log10(scaled) - x * LOG10_E)
    if s == 0.0:
        return LogMagnitude.from_float(float(special.exp1(x)))
    # Γ(-1/2, x) = 2 e^(-x) [x^(-1/2) - sqrt(pi) erfcx(sqrt x)]
    bracket = 1.0 / root - SQRT_PI * float(special.erfcx(root))
    return LogMagnitude(1, math.log10(2.0 * bracket) - x * LOG10_E)


def upper_gamma_remainder(s: float, x: float) -> float:
    """Relative remainder bound of the asymptotic series at (s, x); 0 below the switch-over"""
    if x <= ASYMPTOTIC_THRESHOLD or s == 1.0:
        return 0.0
    return _asymptotic_upper_gamma(s, x)[1]


# ==================== Gaussian deficit tail ====================

def _deficit_series(t: float) -> Tuple[float, float]:
    """
    sum_{k>=1} (c_k - d_k) t^(-k) where c_k, d_k are the asymptotic coefficients
    of Γ(1/2, t) and Γ(0, t); returns (sum, absolute remainder bound).
    """
    c = 1.0
    d = 1.0
    power = 1.0
    total = 0.0
    previous = math.inf
    for k in range(1, _ASYMPTOTIC_MAX_TERMS):
        c *= (0.5 - k)
        d *= -float(k)
        power /= t
        envelope = (abs(c) + abs(d)) * power
        if envelope >= previous or envelope < _ASYMPTOTIC_CUTOFF * abs(total):
            return total, envelope
        total += (c - d) * power
        previous = envelope
    return total, previous


def gaussian_deficit_tail(a: float) -> LogMagnitude:
    """
    2/sqrt(2 pi) * integral_a^inf (1 - a/x) exp(-x^2/2) dx

    Evaluated as 2/sqrt(2 pi) [ Γ(1/2, a²/2)/sqrt 2 - (a/2) Γ(0, a²/2) ]; for a > 10 the
    two tails are merged into one asymptotic series so nothing cancels in float.
    """
    a = float(a)
    if not math.isfinite(a) or a < 0.0:
        raise EnvelopeError(f"tail threshold must be finite and >= 0, got {a!r}")
    if a == 0.0:
        return LogMagnitude.one()

    t = 0.5 * a * a
    if a <= DEFICIT_ASYMPTOTIC_THRESHOLD:
        first = SQRT_HALF * SQRT_PI * float(special.erfc(math.sqrt(t)))
        second = 0.5 * a * float(special.exp1(t))
        return LogMagnitude.from_float(GAUSS_TWO_SIDED * (first - second))

    series, remainder = _deficit_series(t)
    _check_remainder(remainder / abs(series), f"deficit tail at a={a}")
    log10_value = math.log10(GAUSS_TWO_SIDED) - t * LOG10_E - math.log10(a) + math.log10(series)
    return LogMagnitude(1, log10_value)


def appendix_deficit_tail(a: float) -> LogMagnitude:
    """
    The Γ(-1/2) variant 2/sqrt(2 pi) [ Γ(1/2, a²/2)/sqrt 2 - (a/2) Γ(-1/2, a²/2) ].

    Kept for comparison with published figures only; it is not the Gaussian deficit
    integral and turns negative for small a.
    """
    a = float(a)
    if not math.isfinite(a) or a < 0.0:
        raise EnvelopeError(f"tail threshold must be finite and >= 0, got {a!r}")
    if a == 0.0:
        return LogMagnitude.one()
    t = 0.5 * a * a
    first = log_upper_gamma(0.5, t) * SQRT_HALF
    second = log_upper_gamma(-0.5, t) * (0.5 * a)
    return (first - second) * GAUSS_TWO_SIDED
