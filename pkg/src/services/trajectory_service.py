"""
Trajectory engine for x_{n+1} = T(x_n) and the block bound sequence
"""

import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.models.log_scalar import LogScalar
from src.models.params import Params
from src.models.sparse_vec import SparseVec
from src.models.trajectory_record import TrajectoryRecord
from src.services import nonlinear_map, sparse_l2
from src.services.kakutani_weights import DEFAULT_PARAMS

logger = logging.getLogger(__name__)

MAX_SUPPORT = 16
MAX_INDEX = 64


def _record(step: int, x: SparseVec, log_x0: Optional[float], params: Params,
            active: Optional[Tuple[int, int]] = None) -> TrajectoryRecord:
    quarter_bound = decay_bound = None
    if log_x0 is not None:
        quarter_bound = 0.25 * log_x0
        decay_bound = -0.5 * step * params.log_M + 0.125 * log_x0
    if x.is_zero:
        return TrajectoryRecord(step=step, log_norm=None,
                                quarter_bound=quarter_bound, decay_bound=decay_bound)
    log_norm = sparse_l2.norm(x).log_mag
    return TrajectoryRecord(
        step=step,
        log_norm=log_norm,
        support_min=x.support_min,
        support_max=x.support_max,
        band_k=nonlinear_map.band_index(log_norm, params),
        active_k_range=active,
        quarter_bound=quarter_bound,
        decay_bound=decay_bound,
    )


def iterate(x0: SparseVec, steps: int, params: Params = DEFAULT_PARAMS) -> Iterator[TrajectoryRecord]:
    """Stream of records for x_0, ..., x_steps; stops after the first ZERO record"""
    if steps < 0:
        raise ValueError(f"steps must be >= 0 (got {steps})")
    log_x0 = None if x0.is_zero else sparse_l2.norm(x0).log_mag
    if log_x0 is not None:
        nonlinear_map.check_depth(log_x0, params)
    x = x0
    active = None
    if not x.is_zero:
        active = nonlinear_map.active_set(log_x0, params).k_range
    yield _record(0, x, log_x0, params, active)
    if x.is_zero:
        return

    previous = log_x0
    for n in range(1, steps + 1):
        x, _ = nonlinear_map.step(x, params)
        if x.is_zero:
            yield _record(n, x, log_x0, params)
            return
        log_norm = sparse_l2.norm(x).log_mag
        if log_norm > previous + params.log_M + 1e-9:
            logger.warning("growth cap exceeded at step %d: %r -> %r", n, previous, log_norm)
        previous = log_norm
        active = nonlinear_map.active_set(log_norm, params).k_range
        yield _record(n, x, log_x0, params, active)


def run_trajectory(x0: SparseVec, steps: int, params: Params = DEFAULT_PARAMS) -> List[TrajectoryRecord]:
    return list(iterate(x0, steps, params))


def random_vector(rng: np.random.Generator, log_low: float, log_high: float,
                  indices: Optional[Sequence[int]] = None) -> SparseVec:
    """Random signed vector with log-norm uniform in [log_low, log_high).

    Support is 1..16 positions drawn from indices (default 1..64).
    """
    pool = np.arange(1, MAX_INDEX + 1) if indices is None else np.asarray(indices)
    size = int(rng.integers(1, min(MAX_SUPPORT, len(pool)) + 1))
    chosen = rng.choice(pool, size=size, replace=False)
    signs = rng.choice([-1, 1], size=size)
    raw_logs = rng.uniform(-5.0, 0.0, size=size)
    direction = SparseVec({
        int(n): LogScalar(int(s), float(m)) for n, s, m in zip(chosen, signs, raw_logs)
    })
    return sparse_l2.with_log_norm(direction, float(rng.uniform(log_low, log_high)))


def random_initial_vector(rng: np.random.Generator, band: int,
                          params: Params = DEFAULT_PARAMS) -> SparseVec:
    """Random x_0 with support in 1..64 and log-norm uniform in band k"""
    return random_vector(
        rng,
        nonlinear_map.band_edge(band + 1, params),
        nonlinear_map.band_edge(band, params),
    )


def band_exits(records: List[TrajectoryRecord], params: Params = DEFAULT_PARAMS) -> List[Tuple[int, int]]:
    """The (n(i), k(i)) pairs of the block argument.

    k(i) is fixed by ||x_n(i)|| in [M^(-2^(k+2)), M^(-2^(k+1))) and n(i+1) is
    the first later step below M^(-2^(k(i)+2)); ZERO counts as below.
    """
    if not records or records[0].is_zero:
        return []
    first_band = nonlinear_map.band_index(records[0].log_norm, params)
    if first_band is None or first_band < 2:
        return []
    exits = [(records[0].step, first_band - 1)]
    for record in records[1:]:
        _, k = exits[-1]
        if record.is_zero:
            exits.append((record.step, None))
            break
        if record.log_norm < nonlinear_map.band_edge(k + 2, params):
            exits.append((record.step, nonlinear_map.band_index(record.log_norm, params) - 1))
    return exits


def bounding_exponents(k: int, n_terms: int) -> List[int]:
    """a_0, a_1, ...: 2^k repeated 2^k times, then 2^(k+1) repeated 2^(k+1) times, ..."""
    if k < 0:
        raise ValueError(f"k must be >= 0 (got {k})")
    exponents: List[int] = []
    level = k
    while len(exponents) < n_terms:
        block = 1 << level
        exponents.extend([block] * min(block, n_terms - len(exponents)))
        level += 1
    return exponents


def blockwise_bound_records(k: int, steps: int, params: Params = DEFAULT_PARAMS) -> List[TrajectoryRecord]:
    """Records whose log-norms are -a_n ln M for the block sequence"""
    exponents = bounding_exponents(k, steps + 1)
    log_x0 = -exponents[0] * params.log_M
    records = []
    for n, a in enumerate(exponents):
        log_norm = -a * params.log_M
        records.append(TrajectoryRecord(
            step=n,
            log_norm=log_norm,
            band_k=nonlinear_map.band_index(log_norm, params),
            quarter_bound=0.25 * log_x0,
            decay_bound=-0.5 * n * params.log_M + 0.125 * log_x0,
        ))
    return records
