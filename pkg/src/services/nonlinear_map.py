"""
The nonlinear perturbation N and the map T = W_eps + N.

For a fixed norm t = ||x||, W_eps + N~(t) is again a weighted shift whose
weight at n is alpha_n * (1 - c_{k(n)+1}(t)). T is evaluated as one
application of that effective shift. All band tests compare log t against
the edges -2^j ln M, so nothing here underflows at deep bands.
"""

import math
from functools import lru_cache
from typing import Optional, Tuple

from src.exceptions import UsageError
from src.models.active_band import ActiveBand, CutoffSpec
from src.models.log_scalar import LogScalar, ZERO
from src.models.params import Params
from src.models.shift_spec import ShiftSpec
from src.models.sparse_vec import SparseVec
from src.services import logspace, sparse_l2
from src.services.kakutani_weights import DEFAULT_PARAMS, alpha, dyadic_valuation, epsilon
from src.services.logspace import CancellationCounter
from src.services.shift_operators import apply, truncation, w_epsilon

LOG_TWO = math.log(2.0)

# active_set reads edges a few levels below the band; 2.0 ** j overflows at j = 1024
DEEPEST_BAND = 1000


@lru_cache(maxsize=4096)
def _edge(j: int, log_M: float) -> float:
    return -(2.0 ** j) * log_M


def band_edge(j: int, params: Params = DEFAULT_PARAMS) -> float:
    """log of M^(-2^j)"""
    return _edge(j, params.log_M)


def check_depth(log_t: float, params: Params = DEFAULT_PARAMS) -> None:
    """Reject norms that are not finite or lie below band DEEPEST_BAND"""
    if not math.isfinite(log_t):
        raise UsageError(f"log norm must be finite (got {log_t!r})")
    if log_t < band_edge(DEEPEST_BAND, params):
        raise UsageError(
            f"log norm {log_t!r} lies below M^(-2^{DEEPEST_BAND}), past the deepest supported band"
        )


def smoothstep(s: float) -> float:
    return s * s * (3.0 - 2.0 * s)


def smoothstep_prime(s: float) -> float:
    return 6.0 * s * (1.0 - s)


def phi1(a: float, b: float, t: float) -> Tuple[float, float]:
    """Cubic Hermite cutoff on [a, b] and its derivative in t.

    Outside [a, b] the boundary value is returned with zero derivative.
    """
    if not a < b:
        raise ValueError(f"cutoff needs a < b (got a={a}, b={b})")
    if t <= a:
        return 0.0, 0.0
    if t >= b:
        return 1.0, 0.0
    s = (t - a) / (b - a)
    return smoothstep(s), smoothstep_prime(s) / (b - a)


def phi2(a: float, b: float, t: float) -> Tuple[float, float]:
    value, slope = phi1(a, b, t)
    return 1.0 - value, -slope


def ramp_position(log_t: float, cutoff: CutoffSpec) -> float:
    """s = (t - a) / (b - a) computed in the frame shifted by log b"""
    gap = cutoff.log_a - cutoff.log_b
    s = (math.exp(log_t - cutoff.log_b) - math.exp(gap)) / -math.expm1(gap)
    return min(1.0, max(0.0, s))


def ramp_remaining(log_t: float, cutoff: CutoffSpec) -> float:
    """1 - s = (b - t) / (b - a), accurate when t is close to b"""
    gap = cutoff.log_a - cutoff.log_b
    r = math.expm1(log_t - cutoff.log_b) / math.expm1(gap)
    return min(1.0, max(0.0, r))


def _inverse_width(cutoff: CutoffSpec) -> float:
    """log of 1 / (b - a)"""
    gap = cutoff.log_a - cutoff.log_b
    return -cutoff.log_b - math.log(-math.expm1(gap))


def _level_cutoffs(k: int, params: Params) -> Tuple[float, float, float, float]:
    return (
        band_edge(k + 3, params),
        band_edge(k + 2, params),
        band_edge(k, params),
        band_edge(k - 1, params),
    )


def envelope(k: int, log_t: float, params: Params = DEFAULT_PARAMS) -> float:
    """c_k(t) in [0, 1] with N~_k(t) = -c_k(t) L_k"""
    if k < 1:
        raise ValueError(f"envelope levels start at 1 (got {k})")
    e3, e2, e0, em = _level_cutoffs(k, params)
    if log_t < e3:
        return 0.0
    if log_t < e2:
        return smoothstep(ramp_position(log_t, CutoffSpec(e3, e2)))
    if log_t < e0:
        return 1.0
    if log_t < em:
        # 1 - S(s) = S(1 - s)
        return smoothstep(ramp_remaining(log_t, CutoffSpec(e0, em)))
    return 0.0


def envelope_complement(k: int, log_t: float, params: Params = DEFAULT_PARAMS) -> float:
    """1 - c_k(t) without forming 1 - c_k"""
    if k < 1:
        raise ValueError(f"envelope levels start at 1 (got {k})")
    e3, e2, e0, em = _level_cutoffs(k, params)
    if log_t < e3:
        return 1.0
    if log_t < e2:
        return smoothstep(ramp_remaining(log_t, CutoffSpec(e3, e2)))
    if log_t < e0:
        return 0.0
    if log_t < em:
        return smoothstep(ramp_position(log_t, CutoffSpec(e0, em)))
    return 1.0


def envelope_slope(k: int, log_t: float, params: Params = DEFAULT_PARAMS) -> LogScalar:
    """d c_k / dt as a LogScalar; exact zero off the two ramps"""
    if k < 1:
        raise ValueError(f"envelope levels start at 1 (got {k})")
    e3, e2, e0, em = _level_cutoffs(k, params)
    if e3 <= log_t < e2:
        cutoff, sign = CutoffSpec(e3, e2), 1
    elif e0 <= log_t < em:
        cutoff, sign = CutoffSpec(e0, em), -1
    else:
        return ZERO
    shape = smoothstep_prime(ramp_position(log_t, cutoff))
    if shape <= 0.0:
        return ZERO
    return LogScalar(sign, math.log(shape) + _inverse_width(cutoff))


def in_level_support(k: int, log_t: float, params: Params = DEFAULT_PARAMS) -> bool:
    """M^(-2^(k+3)) <= t < M^(-2^(k-1))"""
    return band_edge(k + 3, params) <= log_t < band_edge(k - 1, params)


def active_set(log_t: float, params: Params = DEFAULT_PARAMS) -> ActiveBand:
    """Consecutive levels k with 2^(k-1) < u <= 2^(k+3), u = -log t / ln M"""
    if log_t >= 0.0:
        return ActiveBand(log_t)
    u = -log_t / params.log_M
    top = math.floor(math.log2(u)) if u > 0 else 0
    k_list = tuple(
        k for k in range(max(1, top - 4), top + 3)
        if in_level_support(k, log_t, params)
    )
    return ActiveBand(
        log_t=log_t,
        k_list=k_list,
        envelopes=tuple(envelope(k, log_t, params) for k in k_list),
        complements=tuple(envelope_complement(k, log_t, params) for k in k_list),
    )


def band_index(log_t: float, params: Params = DEFAULT_PARAMS):
    """The k >= 0 with t in [M^(-2^(k+1)), M^(-2^k)), or None when t >= M^(-1)"""
    if log_t >= band_edge(0, params):
        return None
    u = -log_t / params.log_M
    k = max(0, math.ceil(math.log2(u)) - 1)
    # the float estimate may be one off at the edges
    while log_t < band_edge(k + 1, params):
        k += 1
    while k > 0 and log_t >= band_edge(k, params):
        k -= 1
    return k


def band_radius(k: int, fraction: float = 0.5, params: Params = DEFAULT_PARAMS) -> float:
    """log of a radius inside band k: u = 2^k (1 + fraction), fraction in [0, 1)"""
    if not 0.0 <= fraction < 1.0:
        raise ValueError(f"fraction must lie in [0, 1) (got {fraction})")
    return -(2.0 ** k) * (1.0 + fraction) * params.log_M


def effective_weight(n: int, log_t: float, params: Params = DEFAULT_PARAMS,
                     band: ActiveBand = None) -> LogScalar:
    """beta_n(t) = alpha_n (1 - c_{k(n)+1}(t))"""
    if band is None:
        band = active_set(log_t, params)
    weight = alpha(n, params)
    remaining = band.complement_for(dyadic_valuation(n) + 1)
    if remaining >= 1.0:
        return weight
    if remaining <= 0.0:
        return ZERO
    return LogScalar(1, weight.log_mag + math.log(remaining))


def effective_shift(log_t: float, params: Params = DEFAULT_PARAMS) -> ShiftSpec:
    """The weighted shift W_eps + N~(t)"""
    band = active_set(log_t, params)
    return ShiftSpec(
        weight=lambda n: effective_weight(n, log_t, params, band),
        label=f"W_eps + N(t), log t = {log_t!r}",
    )


def step(x: SparseVec, params: Params = DEFAULT_PARAMS) -> Tuple[SparseVec, ActiveBand]:
    """T(x) together with the active band used to compute it"""
    if x.is_zero:
        return sparse_l2.zero_vector(), ActiveBand(0.0)
    log_t = sparse_l2.norm(x).log_mag
    band = active_set(log_t, params)
    entries = {}
    for n, c in x.entries.items():
        w = effective_weight(n, log_t, params, band)
        if w.sign != 0:
            entries[n + 1] = logspace.mul(w, c)
    return SparseVec(entries), band


def T(x: SparseVec, params: Params = DEFAULT_PARAMS) -> SparseVec:
    """T(x) = W_eps x + N(x)"""
    return step(x, params)[0]


def N(x: SparseVec, params: Params = DEFAULT_PARAMS) -> SparseVec:
    """N(x) = sum_k N~_k(||x||) x, assembled from the envelope terms"""
    if x.is_zero:
        return sparse_l2.zero_vector()
    band = active_set(sparse_l2.norm(x).log_mag, params)
    entries = {}
    for n, c in x.entries.items():
        level = dyadic_valuation(n) + 1
        weight = band.envelope_for(level)
        if weight == 0.0:
            continue
        entries[n + 1] = LogScalar(
            -c.sign,
            math.log(weight) + epsilon(level, params).log_mag + c.log_mag,
        )
    return SparseVec(entries)


def DN_apply(x: SparseVec, y: SparseVec, params: Params = DEFAULT_PARAMS,
             counter: Optional[CancellationCounter] = None) -> SparseVec:
    """[DN(x)](y) = sum_k phi_k'(||x||) <x/||x||, y> L_k x + phi_k(||x||) L_k y, phi_k = -c_k"""
    if x.is_zero or y.is_zero:
        return sparse_l2.zero_vector()
    t = sparse_l2.norm(x)
    band = active_set(t.log_mag, params)
    projection = logspace.div(sparse_l2.inner(x, y, counter), t)

    result = sparse_l2.zero_vector()
    for k, c in zip(band.k_list, band.envelopes):
        level_shift = truncation(k, params)
        if c != 0.0:
            result = sparse_l2.axpy(LogScalar.from_real(-c), apply(level_shift, y), result, counter)
        slope = envelope_slope(k, t.log_mag, params)
        coefficient = -logspace.mul(slope, projection)
        if coefficient.sign != 0:
            result = sparse_l2.axpy(coefficient, apply(level_shift, x), result, counter)
    return result


def DT_apply(x: SparseVec, y: SparseVec, params: Params = DEFAULT_PARAMS,
             counter: Optional[CancellationCounter] = None) -> SparseVec:
    """[DT(x)](y); DT(0) = W_eps"""
    linear = apply(w_epsilon(params), y)
    if x.is_zero:
        return linear
    return sparse_l2.axpy(LogScalar.one(), DN_apply(x, y, params, counter), linear, counter)


def dn_level_bound(k: int, log_t: float, params: Params = DEFAULT_PARAMS) -> LogScalar:
    """Case bound on ||DN_k(x)|| at ||x|| = t, ramp factors taken at the ramp tops"""
    e3, e2, e0, em = _level_cutoffs(k, params)
    eps_k = epsilon(k, params)
    if log_t < e3 or log_t >= em:
        return ZERO
    if e2 <= log_t < e0:
        return eps_k
    # 2 / (1 - M^(-2^j)) with j = k+2 on the rising ramp, k-1 on the falling one
    j = k + 2 if log_t < e2 else k - 1
    factor = LOG_TWO - math.log(-math.expm1(band_edge(j, params)))
    return logspace.mul(eps_k, logspace.add(LogScalar(1, factor), LogScalar.one()))


def dn_cap(log_t: float, params: Params = DEFAULT_PARAMS) -> LogScalar:
    """Sum of the per-level bounds over the active levels at t"""
    total = ZERO
    for k in active_set(log_t, params).k_list:
        total = logspace.add(total, dn_level_bound(k, log_t, params))
    return total
