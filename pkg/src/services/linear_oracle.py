"""
Direct linear-scale implementation of T for shallow bands.

Used only to cross-check the log-domain engine while every quantity is a
normal double; thresholds that underflow to 0.0 are below any such t.
"""

import math
from typing import Dict, List, Optional

from src.models.params import Params
from src.models.sparse_vec import SparseVec
from src.services.kakutani_weights import DEFAULT_PARAMS, dyadic_valuation
from src.services.nonlinear_map import phi1, phi2, smoothstep

SMALLEST_TRUSTED_NORM = 1e-250


def to_linear(x: SparseVec) -> Dict[int, float]:
    return {n: c.to_real() for n, c in x.entries.items()}


def linear_alpha(n: int, params: Params) -> float:
    return params.M / params.K ** dyadic_valuation(n)


def linear_threshold(j: int, params: Params) -> float:
    return params.M ** -(2.0 ** j)


def _thresholds(k: int, params: Params):
    return tuple(linear_threshold(j, params) for j in (k + 3, k + 2, k, k - 1))


def linear_envelope(k: int, t: float, params: Params = DEFAULT_PARAMS) -> float:
    """c_k(t) straight from the phi1 / phi2 cutoffs"""
    e3, e2, e0, em = _thresholds(k, params)
    if t < e3:
        return 0.0
    if t < e2:
        return phi1(e3, e2, t)[0]
    if t < e0:
        return 1.0
    if t < em:
        return phi2(e0, em, t)[0]
    return 0.0


def linear_complement(k: int, t: float, params: Params = DEFAULT_PARAMS) -> float:
    """1 - c_k(t) via S(1 - s) on the rising ramp and S(s) on the falling one"""
    e3, e2, e0, em = _thresholds(k, params)
    if t < e3:
        return 1.0
    if t < e2:
        return smoothstep((e2 - t) / (e2 - e3))
    if t < e0:
        return 0.0
    if t < em:
        return smoothstep((t - e0) / (em - e0))
    return 1.0


def linear_norm(x: Dict[int, float]) -> float:
    return math.hypot(*x.values()) if x else 0.0


def linear_step(x: Dict[int, float], params: Params = DEFAULT_PARAMS) -> Dict[int, float]:
    t = linear_norm(x)
    if t == 0.0:
        return {}
    image = {}
    for n, value in x.items():
        weight = linear_alpha(n, params) * linear_complement(dyadic_valuation(n) + 1, t, params)
        if weight != 0.0:
            image[n + 1] = weight * value
    return image


def linear_trajectory(x0: Dict[int, float], steps: int,
                      params: Params = DEFAULT_PARAMS) -> List[Optional[float]]:
    """Norms ||x_n|| for n = 0..steps; stops at zero or below the trusted range"""
    norms: List[Optional[float]] = []
    x = dict(x0)
    for _ in range(steps + 1):
        t = linear_norm(x)
        norms.append(t)
        if t == 0.0 or t < SMALLEST_TRUSTED_NORM:
            break
        x = linear_step(x, params)
    return norms
