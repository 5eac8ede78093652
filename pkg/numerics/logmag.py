"""
Sign plus base-10 logarithm arithmetic for magnitudes far outside float range
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Any, Dict, Union

LOG10_E = math.log10(math.e)
LN_10 = math.log(10.0)

# 10**x is exact to float precision inside this window
FLOAT_WINDOW = (-300.0, 300.0)

Number = Union[int, float]


@total_ordering
@dataclass(frozen=True)
class LogMagnitude:
    """
    A real number stored as sign * 10**log10_abs.

    sign is -1, 0 or +1; log10_abs is meaningless (stored as -inf) when sign is 0.
    """

    sign: int
    log10_abs: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, 'log10_abs', -math.inf)
        elif math.isnan(self.log10_abs):
            raise ValueError("log10_abs must not be NaN")
        elif self.log10_abs == -math.inf:
            object.__setattr__(self, 'sign', 0)

    # ------------------------------------------------------------------ builders

    @classmethod
    def zero(cls) -> LogMagnitude:
        return cls(0)

    @classmethod
    def one(cls) -> LogMagnitude:
        return cls(1, 0.0)

    @classmethod
    def from_float(cls, value: Number) -> LogMagnitude:
        value = float(value)
        if math.isnan(value):
            raise ValueError("cannot represent NaN")
        if value == 0.0:
            return cls(0)
        return cls(1 if value > 0 else -1, math.log10(abs(value)))

    @classmethod
    def from_ln(cls, ln_abs: float, sign: int = 1) -> LogMagnitude:
        """Build from a natural logarithm of the magnitude"""
        return cls(sign, ln_abs * LOG10_E)

    @classmethod
    def from_mpf(cls, value: Any) -> LogMagnitude:
        """Build from an mpmath number without passing through float"""
        import mpmath

        if value == 0:
            return cls(0)
        return cls(1 if value > 0 else -1, float(mpmath.log10(abs(value))))

    # --------------------------------------------------------------- conversions

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log10_abs > 308.0:
            return self.sign * math.inf
        if self.log10_abs < -340.0:
            return 0.0
        return self.sign * 10.0 ** self.log10_abs

    def exponent(self) -> int:
        """Decimal exponent e with value = m * 10**e, 1 <= |m| < 10"""
        if self.sign == 0:
            raise ValueError("zero has no exponent")
        return math.floor(self.log10_abs)

    def mantissa(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * 10.0 ** (self.log10_abs - self.exponent())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sign": self.sign,
            "log10_abs": None if self.sign == 0 else float(self.log10_abs),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> LogMagnitude:
        if data.get("sign", 0) == 0 or data.get("log10_abs") is None:
            return cls(0)
        return cls(int(data["sign"]), float(data["log10_abs"]))

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        if math.isinf(self.log10_abs):
            return "-inf" if self.sign < 0 else "inf"
        return f"{self.mantissa():.4f}e{self.exponent():+d}"

    # ---------------------------------------------------------------- arithmetic

    def __neg__(self) -> LogMagnitude:
        return LogMagnitude(-self.sign, self.log10_abs)

    def __abs__(self) -> LogMagnitude:
        return LogMagnitude(abs(self.sign), self.log10_abs)

    def __mul__(self, other: Union[LogMagnitude, Number]) -> LogMagnitude:
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return LogMagnitude(0)
        return LogMagnitude(self.sign * other.sign, self.log10_abs + other.log10_abs)

    __rmul__ = __mul__

    def __truediv__(self, other: Union[LogMagnitude, Number]) -> LogMagnitude:
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogMagnitude")
        if self.sign == 0:
            return LogMagnitude(0)
        return LogMagnitude(self.sign * other.sign, self.log10_abs - other.log10_abs)

    def __add__(self, other: Union[LogMagnitude, Number]) -> LogMagnitude:
        other = _coerce(other)
        if other.sign == 0:
            return self
        if self.sign == 0:
            return other
        big, small = (self, other) if self.log10_abs >= other.log10_abs else (other, self)
        ratio = 10.0 ** (small.log10_abs - big.log10_abs)
        if big.sign == small.sign:
            return LogMagnitude(big.sign, big.log10_abs + math.log1p(ratio) / LN_10)
        if ratio >= 1.0:
            return LogMagnitude(0)
        return LogMagnitude(big.sign, big.log10_abs + math.log1p(-ratio) / LN_10)

    __radd__ = __add__

    def __sub__(self, other: Union[LogMagnitude, Number]) -> LogMagnitude:
        return self + (-_coerce(other))

    def __rsub__(self, other: Union[LogMagnitude, Number]) -> LogMagnitude:
        return _coerce(other) - self

    def __lt__(self, other: Union[LogMagnitude, Number]) -> bool:
        other = _coerce(other)
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.log10_abs < other.log10_abs
        return self.log10_abs > other.log10_abs


def _coerce(value: Union[LogMagnitude, Number]) -> LogMagnitude:
    if isinstance(value, LogMagnitude):
        return value
    return LogMagnitude.from_float(value)
