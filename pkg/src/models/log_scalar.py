"""
Signed log-domain scalar
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LogScalar:
    """Signed real stored as (sign, natural log of |value|).

    sign 0 is exact zero; log_mag is ignored in that state.
    """
    sign: int
    log_mag: float = 0.0

    @classmethod
    def zero(cls) -> 'LogScalar':
        return ZERO

    @classmethod
    def one(cls) -> 'LogScalar':
        return ONE

    @classmethod
    def from_real(cls, value: float) -> 'LogScalar':
        if value == 0:
            return ZERO
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @classmethod
    def from_log(cls, log_mag: float, sign: int = 1) -> 'LogScalar':
        if sign == 0:
            return ZERO
        return cls(sign, log_mag)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_mag)

    def __neg__(self) -> 'LogScalar':
        if self.sign == 0:
            return self
        return LogScalar(-self.sign, self.log_mag)

    def __abs__(self) -> 'LogScalar':
        if self.sign >= 0:
            return self
        return LogScalar(1, self.log_mag)

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        return f"{'+' if self.sign > 0 else '-'}exp({self.log_mag!r})"


ZERO = LogScalar(0, 0.0)
ONE = LogScalar(1, 0.0)
