"""
Weighted shift operators: application, power norms over a horizon,
Kakutani's spectral-radius series and nilpotency of operator products
"""

import logging
import math
from typing import Iterable, Sequence

import numpy as np

from src.exceptions import OmegaCertificationError, UsageError
from src.models.log_scalar import LogScalar, ZERO
from src.models.params import Params
from src.models.shift_spec import ShiftSpec
from src.models.sparse_vec import SparseVec
from src.models.weight_profile import ProfileKind, WeightProfile
from src.services import logspace
from src.services.kakutani_weights import DEFAULT_PARAMS, epsilon, in_omega_k, profile_weight
from src.services.sparse_l2 import basis

logger = logging.getLogger(__name__)

MAX_DISTINCT_WEIGHTS = 64


def shift_from_profile(profile: WeightProfile) -> ShiftSpec:
    return ShiftSpec(
        weight=lambda n: profile_weight(profile, n),
        label=profile.label,
        profile=profile,
    )


def w_epsilon(params: Params = DEFAULT_PARAMS) -> ShiftSpec:
    """Kakutani's shift W_eps"""
    return shift_from_profile(WeightProfile(params))


def truncation(m: int, params: Params = DEFAULT_PARAMS) -> ShiftSpec:
    """L_m: only the eps_m weights of W_eps"""
    return shift_from_profile(WeightProfile(params, ProfileKind.SINGLE_LEVEL, m))


def complement(m: int, params: Params = DEFAULT_PARAMS) -> ShiftSpec:
    """W_eps - L_m, nilpotent of index 2^m"""
    return shift_from_profile(WeightProfile(params, ProfileKind.COMPLEMENT, m))


def apply(op: ShiftSpec, x: SparseVec) -> SparseVec:
    """Each entry (n, c) moves to (n+1, weight(n) c); zero products are dropped"""
    entries = {}
    for n, c in x.entries.items():
        w = op.weight(n)
        if w.sign != 0:
            entries[n + 1] = logspace.mul(w, c)
    return SparseVec(entries)


def apply_product(ops: Sequence[ShiftSpec], x: SparseVec) -> SparseVec:
    """W_1 W_2 ... W_r x, i.e. W_r is applied first"""
    for op in reversed(ops):
        if x.is_zero:
            break
        x = apply(op, x)
    return x


def _window_counts(codes: np.ndarray, code: int, k: int, horizon: int) -> np.ndarray:
    """How many of the k weights in each window carry the given code"""
    prefix = np.concatenate(([0], np.cumsum(codes == code, dtype=np.int64)))
    return prefix[k:k + horizon] - prefix[:horizon]


def _window_log_sums(logs: np.ndarray, k: int, horizon: int) -> np.ndarray:
    """sum of logs[n:n+k] for n < horizon.

    Profiles take few distinct log weights, so each window sum is built as
    sum_j count_j * value_j from integer prefix counts. A one-weight window
    then returns its weight's log unchanged. Shifts with many distinct
    weights fall back to an fsum per window.
    """
    values, codes = np.unique(logs, return_inverse=True)
    if values.size > MAX_DISTINCT_WEIGHTS:
        return np.array([math.fsum(logs[n:n + k]) for n in range(horizon)])
    sums = np.zeros(horizon)
    for code, value in enumerate(values):
        sums += _window_counts(codes, code, k, horizon) * value
    return sums


def op_norm_power(op: ShiftSpec, k: int, horizon: int) -> LogScalar:
    """max over start positions n <= horizon of |w_n w_{n+1} ... w_{n+k-1}|.

    Windows that contain an exact-zero weight are excluded through a prefix
    count of zeros.
    """
    if k < 1:
        raise UsageError(f"power must be >= 1 (got {k})")
    if horizon < k:
        raise UsageError(f"horizon {horizon} is shorter than the power {k}")
    weights = [op.weight(n) for n in range(1, horizon + k)]
    logs = np.array([w.log_mag if w.sign != 0 else 0.0 for w in weights])
    zeros = np.array([w.sign == 0 for w in weights], dtype=np.int64)

    zero_prefix = np.concatenate(([0], np.cumsum(zeros)))
    window_zeros = zero_prefix[k:k + horizon] - zero_prefix[:horizon]
    alive = window_zeros == 0
    if not alive.any():
        return ZERO
    window_logs = _window_log_sums(logs, k, horizon)
    return LogScalar(1, float(window_logs[alive].max()))


def wn_norm_closed(p: int, params: Params = DEFAULT_PARAMS) -> LogScalar:
    """||W_eps^(2^p - 1)|| = prod_{q=1..p} eps_q^(2^(p-q))"""
    if p < 1:
        raise UsageError(f"p must be >= 1 (got {p})")
    return LogScalar(1, math.fsum(
        2.0 ** (p - q) * epsilon(q, params).log_mag for q in range(1, p + 1)
    ))


def rho_estimate(p: int, params: Params = DEFAULT_PARAMS) -> float:
    """||W_eps^n||^(1/n) at n = 2^p - 1, via 2^p/(2^p-1) * sum_q log(eps_q)/2^q"""
    if p < 1:
        raise UsageError(f"p must be >= 1 (got {p})")
    series = math.fsum(epsilon(q, params).log_mag / 2.0 ** q for q in range(1, p + 1))
    n = 2.0 ** p
    return math.exp(n / (n - 1.0) * series)


def spectral_radius(params: Params = DEFAULT_PARAMS) -> float:
    """Limit of rho_estimate: M / K"""
    return params.M / params.K


def verify_nilpotent_set(ops: Sequence[ShiftSpec], k: int, basis_range: Iterable[int]) -> bool:
    """True iff the product of ops sends every e_i, i in basis_range, to exact zero.

    Every operator must first be certified in Omega_k over a window covering
    basis_range plus 2^k positions.
    """
    indices = list(basis_range)
    if not indices:
        return True
    window_stop = max(indices) + (1 << k) + 1

    failed = []
    certified = {}
    for position, op in enumerate(ops):
        key = id(op)
        if key not in certified:
            weights = [op.weight(n) for n in range(1, window_stop)]
            certified[key] = in_omega_k(weights, k)
        if not certified[key]:
            failed.append(position)
    if failed:
        raise OmegaCertificationError(k, failed)

    for i in indices:
        image = apply_product(ops, basis(i))
        if not image.is_zero:
            logger.debug("e_%d survives a product of %d operators from Omega_%d", i, len(ops), k)
            return False
    return True
