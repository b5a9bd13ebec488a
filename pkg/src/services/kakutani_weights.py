"""
Kakutani weight sequence: eps_m, the dyadic valuation k(n), alpha_n,
the L_m masks and the Omega_k membership predicate
"""

from typing import Sequence

from src.exceptions import InsufficientWindowError
from src.models.log_scalar import LogScalar, ZERO
from src.models.params import Params
from src.models.weight_profile import ProfileKind, WeightProfile

DEFAULT_PARAMS = Params(5.0, 3.0)


def dyadic_valuation(n: int) -> int:
    """The k with n = 2^k * (odd)"""
    if n < 1:
        raise ValueError(f"dyadic valuation needs n >= 1 (got {n})")
    return (n & -n).bit_length() - 1


def epsilon(m: int, params: Params = DEFAULT_PARAMS) -> LogScalar:
    """eps_m = M / K^(m-1), built directly in the log domain"""
    if m < 1:
        raise ValueError(f"eps_m needs m >= 1 (got {m})")
    return LogScalar(1, params.log_M - (m - 1) * params.log_K)


def alpha(n: int, params: Params = DEFAULT_PARAMS) -> LogScalar:
    """alpha_n = eps_{1 + k(n)}"""
    return epsilon(dyadic_valuation(n) + 1, params)


def lm_hits(m: int, n: int) -> bool:
    """True iff L_m has a nonzero weight at position n"""
    if m < 1:
        raise ValueError(f"L_m needs m >= 1 (got {m})")
    return dyadic_valuation(n) == m - 1


def profile_weight(profile: WeightProfile, n: int) -> LogScalar:
    """Weight of the profile at position n"""
    if profile.kind is ProfileKind.FULL:
        return alpha(n, profile.params)
    hit = lm_hits(profile.m, n)
    if profile.kind is ProfileKind.SINGLE_LEVEL:
        return alpha(n, profile.params) if hit else ZERO
    return ZERO if hit else alpha(n, profile.params)


def profile_window(profile: WeightProfile, start: int, stop: int) -> list:
    """Weights at positions start..stop-1"""
    return [profile_weight(profile, n) for n in range(start, stop)]


def in_omega_k(weights: Sequence[LogScalar], k: int, start: int = 1) -> bool:
    """True iff every position n with k(n) = k-1 in the window has an exact-zero weight.

    weights[i] is the weight at position start + i. The window must cover at
    least one full period 2^k, otherwise membership cannot be certified.
    """
    if k < 1:
        raise ValueError(f"Omega_k needs k >= 1 (got {k})")
    if start < 1:
        raise ValueError(f"weight windows start at position >= 1 (got {start})")
    period = 1 << k
    if len(weights) < period:
        raise InsufficientWindowError(
            f"window of {len(weights)} weights cannot certify Omega_{k} (needs {period})"
        )
    for offset, weight in enumerate(weights):
        n = start + offset
        if dyadic_valuation(n) == k - 1 and weight.sign != 0:
            return False
    return True
