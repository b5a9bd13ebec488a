"""
Signed log-domain arithmetic on LogScalar values
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from src.models.log_scalar import LogScalar, ZERO

logger = logging.getLogger(__name__)


@dataclass
class CancellationCounter:
    """Counts opposite-sign additions whose magnitudes agree to within one ulp"""
    count: int = 0


def mul(a: LogScalar, b: LogScalar) -> LogScalar:
    """Product: signs multiply, log magnitudes add; zero absorbs"""
    if a.sign == 0 or b.sign == 0:
        return ZERO
    return LogScalar(a.sign * b.sign, a.log_mag + b.log_mag)


def div(a: LogScalar, b: LogScalar) -> LogScalar:
    if b.sign == 0:
        raise ZeroDivisionError("division by an exact-zero LogScalar")
    if a.sign == 0:
        return ZERO
    return LogScalar(a.sign * b.sign, a.log_mag - b.log_mag)


def power(a: LogScalar, exponent: float) -> LogScalar:
    """|a|^exponent for a > 0"""
    if a.sign < 0:
        raise ValueError("real powers are only defined for nonnegative values")
    if a.sign == 0:
        if exponent <= 0:
            raise ValueError("0 cannot be raised to a nonpositive power")
        return ZERO
    return LogScalar(1, a.log_mag * exponent)


def add(a: LogScalar, b: LogScalar, counter: Optional[CancellationCounter] = None) -> LogScalar:
    """Sum via max(log_mag) + log1p(+-exp(delta)), delta <= 0.

    Opposite signs with bit-identical magnitudes cancel to exact zero.
    """
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    if a.log_mag < b.log_mag:
        a, b = b, a
    delta = b.log_mag - a.log_mag
    if a.sign == b.sign:
        return LogScalar(a.sign, a.log_mag + math.log1p(math.exp(delta)))
    if delta == 0.0:
        return ZERO
    if counter is not None and -delta <= math.ulp(a.log_mag):
        counter.count += 1
        logger.debug("catastrophic cancellation at log magnitude %r", a.log_mag)
    # log(1 - e^delta) without rounding e^delta to 1
    return LogScalar(a.sign, a.log_mag + math.log(-math.expm1(delta)))


def sub(a: LogScalar, b: LogScalar, counter: Optional[CancellationCounter] = None) -> LogScalar:
    return add(a, -b, counter)


def log_sum_exp_sq(terms: Iterable[LogScalar]) -> LogScalar:
    """l^2 norm of the terms: 0.5 * log sum exp(2 * log_mag_i)"""
    mags = np.fromiter((t.log_mag for t in terms if t.sign != 0), dtype=float)
    if mags.size == 0:
        return ZERO
    if mags.size == 1:
        return LogScalar(1, float(mags[0]))
    mags = np.sort(mags)[::-1]
    top = mags[0]
    total = math.fsum(np.exp(2.0 * (mags - top)))
    return LogScalar(1, float(top + 0.5 * math.log(total)))


def compare(a: LogScalar, b: LogScalar) -> int:
    """Three-way comparison of the represented reals"""
    if a.sign != b.sign:
        return 1 if a.sign > b.sign else -1
    if a.sign == 0 or a.log_mag == b.log_mag:
        return 0
    larger = a.log_mag > b.log_mag
    if a.sign > 0:
        return 1 if larger else -1
    return -1 if larger else 1


def relative_log_error(a: LogScalar, b: LogScalar) -> float:
    """|log|a| - log|b|| / max(1, |log|b||) for two nonzero values"""
    if a.sign == 0 or b.sign == 0:
        return 0.0 if a.sign == b.sign else math.inf
    return abs(a.log_mag - b.log_mag) / max(1.0, abs(b.log_mag))
