"""
Service for running stability certificates against trajectories and operators.

Record-based checks take the list produced by trajectory_service.run_trajectory
and compare log-norms directly; nothing is converted back to linear scale.
CertificateService bundles them into the named suites used by `verify`.
"""

import logging
import math
import time
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from src.exceptions import UsageError
from src.models.certificate_report import CertificateReport, CertificateStatus
from src.models.log_scalar import LogScalar
from src.models.params import Params
from src.models.sparse_vec import SparseVec
from src.models.trajectory_record import TrajectoryRecord
from src.services import logspace, nonlinear_map, shift_operators, sparse_l2, trajectory_service
from src.services.kakutani_weights import DEFAULT_PARAMS, alpha, epsilon
from src.services.logspace import CancellationCounter

logger = logging.getLogger(__name__)

PASS = CertificateStatus.PASS
FAIL = CertificateStatus.FAIL
NOT_APPLICABLE = CertificateStatus.NOT_APPLICABLE

EXPONENTIAL_SLACK = 1e-6
GROWTH_SLACK = 1e-9
CANONICAL_RATIO_TOL = 1e-12
FD_TOLERANCE = 1e-5
FD_STEP = 1e-6
FD_LOG_CEILING = math.log(1e150)
LOG_COMPARE_SLACK = 1e-12


def _vacuous(certificate: str) -> CertificateReport:
    return CertificateReport(certificate, PASS, details={'vacuous': True})


def _not_applicable(certificate: str, reason: str) -> CertificateReport:
    return CertificateReport(certificate, NOT_APPLICABLE, details={'reason': reason})


def _mask_positions(levels: Iterable[int], per_level: int = 4) -> List[int]:
    """First few n = 2^(j-1)(2l+1) for each level j"""
    return [(1 << (j - 1)) * (2 * l + 1) for j in levels if j >= 1 for l in range(per_level)]


# =============================================================================
# TRAJECTORY CERTIFICATES
# =============================================================================

def check_stability(records: Sequence[TrajectoryRecord], k: Optional[int] = None,
                    params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """Level bound ||x_n|| < M^(-2^k) and quarter-power bound ||x_n|| < ||x_0||^(1/4).

    k defaults to band(x_0) - 1, the tightest level whose hypothesis
    ||x_0|| < M^(-2^(k+1)) holds. Both comparisons are strict with no slack.
    """
    certificate = 'stability'
    if not records or records[0].is_zero:
        return _vacuous(certificate)
    log_x0 = records[0].log_norm
    if log_x0 >= nonlinear_map.band_edge(2, params):
        return _not_applicable(certificate, "||x_0|| >= M^(-4)")
    if k is None:
        k = nonlinear_map.band_index(log_x0, params) - 1
    if k < 0:
        raise UsageError(f"stability level must be >= 0 (got {k})")
    if log_x0 >= nonlinear_map.band_edge(k + 1, params):
        return _not_applicable(certificate, f"||x_0|| >= M^(-2^{k + 1})")

    level_bound = nonlinear_map.band_edge(k, params)
    quarter_bound = 0.25 * log_x0
    margin = math.inf
    for record in records:
        if record.is_zero:
            break
        for form, bound in (('level', level_bound), ('quarter_power', quarter_bound)):
            if not record.log_norm < bound:
                return CertificateReport(certificate, FAIL, witness={
                    'step': record.step,
                    'form': form,
                    'log_norm': record.log_norm,
                    'log_bound': bound,
                }, details={'k': k})
        margin = min(margin, level_bound - record.log_norm, quarter_bound - record.log_norm)
    return CertificateReport(certificate, PASS, details={
        'k': k,
        'log_level_bound': level_bound,
        'log_quarter_bound': quarter_bound,
        'min_log_margin': margin,
    })


def check_exponential(records: Sequence[TrajectoryRecord], params: Params = DEFAULT_PARAMS,
                      tol: float = EXPONENTIAL_SLACK) -> CertificateReport:
    """log||x_n|| <= -(n/2) ln M + (1/8) log||x_0|| + tol for every nonzero record"""
    certificate = 'exponential'
    if not records or records[0].is_zero:
        return _vacuous(certificate)
    log_x0 = records[0].log_norm
    if log_x0 >= nonlinear_map.band_edge(2, params):
        return _not_applicable(certificate, "||x_0|| >= M^(-4)")

    margin = math.inf
    zero_step = None
    for record in records:
        if record.is_zero:
            zero_step = record.step
            break
        bound = -0.5 * record.step * params.log_M + 0.125 * log_x0
        if record.log_norm > bound + tol:
            return CertificateReport(certificate, FAIL, tolerance=tol, witness={
                'step': record.step,
                'log_norm': record.log_norm,
                'log_bound': bound,
            })
        margin = min(margin, bound - record.log_norm)
    return CertificateReport(certificate, PASS, tolerance=tol, details={
        'min_log_margin': margin,
        'zero_step': zero_step,
        'last_step': records[-1].step,
    })


def check_growth_cap(records: Sequence[TrajectoryRecord], params: Params = DEFAULT_PARAMS,
                     tol: float = GROWTH_SLACK) -> CertificateReport:
    """log||x_(n+1)|| <= log||x_n|| + ln M on consecutive nonzero records"""
    certificate = 'growth_cap'
    worst = -math.inf
    for previous, current in zip(records, records[1:]):
        if previous.is_zero:
            return CertificateReport(certificate, FAIL, tolerance=tol, witness={
                'step': current.step,
                'reason': 'record after ZERO',
            })
        if current.is_zero:
            continue
        growth = current.log_norm - previous.log_norm
        if growth > params.log_M + tol:
            return CertificateReport(certificate, FAIL, tolerance=tol, witness={
                'step': current.step,
                'log_growth': growth,
                'log_cap': params.log_M,
            })
        worst = max(worst, growth)
    details = {'max_log_growth': worst} if worst > -math.inf else {'vacuous': True}
    return CertificateReport(certificate, PASS, tolerance=tol, details=details)


def check_band_dwell(records: Sequence[TrajectoryRecord],
                     params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """At most 2^k consecutive records in band k >= 1; a dwell of exactly 2^k ends in ZERO"""
    certificate = 'band_dwell'
    longest: Dict[int, int] = {}
    i = 0
    while i < len(records):
        band = records[i].band_k
        if records[i].is_zero or band is None or band < 1:
            i += 1
            continue
        j = i
        while j < len(records) and not records[j].is_zero and records[j].band_k == band:
            j += 1
        dwell = j - i
        limit = 1 << band
        followed_by_zero = j < len(records) and records[j].is_zero
        if dwell > limit or (dwell == limit and j < len(records) and not followed_by_zero):
            return CertificateReport(certificate, FAIL, witness={
                'step': records[i].step,
                'band_k': band,
                'dwell': dwell,
                'limit': limit,
            })
        longest[band] = max(longest.get(band, 0), dwell)
        i = j
    return CertificateReport(certificate, PASS, details={
        'longest_dwell': {str(band): dwell for band, dwell in sorted(longest.items())},
    })


def check_band_exits(records: Sequence[TrajectoryRecord],
                     params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """k(i) strictly increasing and n(i+1) - n(i) <= 2^k(i), with equality only into ZERO"""
    certificate = 'band_exits'
    if not records or records[0].is_zero:
        return _vacuous(certificate)
    exits = trajectory_service.band_exits(list(records), params)
    if not exits:
        return _not_applicable(certificate, "x_0 lies above band 2")

    for (n_i, k_i), (n_next, k_next) in zip(exits, exits[1:]):
        gap = n_next - n_i
        limit = 1 << k_i
        ok = gap <= limit if k_next is None else (k_next > k_i and gap < limit)
        if not ok:
            return CertificateReport(certificate, FAIL, witness={
                'step': n_next,
                'k_previous': k_i,
                'k_next': k_next,
                'gap': gap,
                'limit': limit,
            })
    return CertificateReport(certificate, PASS, details={
        'exits': [[n, k] for n, k in exits],
    })


# =============================================================================
# NONLINEARITY SIZE CERTIFICATES
# =============================================================================

def canonical_witness(k: int, log_R: float) -> SparseVec:
    """R e_(2^(k-1)), the direction on which N acts as -eps_k times the shift"""
    return sparse_l2.basis(1 << (k - 1), LogScalar(1, log_R))


def log_ratio(x: SparseVec, params: Params = DEFAULT_PARAMS) -> Optional[float]:
    """log(||N(x)|| / ||x||), or None when N(x) is exactly zero"""
    image = nonlinear_map.N(x, params)
    if image.is_zero:
        return None
    return sparse_l2.norm(image).log_mag - sparse_l2.norm(x).log_mag


def check_ratio_band(k: int, log_R: float, samples: int = 200, seed: int = 7,
                     params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """eps_k from the canonical witness and <= 4 eps_(k-2) on random directions at radius R"""
    certificate = f'ratio_band_k{k:02d}'
    if k < 3:
        raise UsageError(f"ratio band needs k >= 3 (got {k})")
    if not nonlinear_map.band_edge(k + 1, params) <= log_R < nonlinear_map.band_edge(k, params):
        raise UsageError(f"radius exp({log_R!r}) is outside band {k}")

    # ||N(x)|| against eps_k R; the ratio itself carries |log R| * ulp rounding
    target = LogScalar(1, epsilon(k, params).log_mag + log_R)
    image = nonlinear_map.N(canonical_witness(k, log_R), params)
    canonical_error = (
        math.inf if image.is_zero
        else logspace.relative_log_error(sparse_l2.norm(image), target)
    )
    canonical = None if image.is_zero else sparse_l2.norm(image).log_mag - log_R
    if canonical_error > CANONICAL_RATIO_TOL:
        return CertificateReport(certificate, FAIL, tolerance=CANONICAL_RATIO_TOL, witness={
            'direction': 'canonical',
            'log_ratio': canonical,
            'log_eps_k': epsilon(k, params).log_mag,
        })

    ceiling = math.log(4.0) + epsilon(k - 2, params).log_mag
    pool = sorted(set(range(1, trajectory_service.MAX_INDEX + 1))
                  | set(_mask_positions(range(k - 2, k + 2))))
    rng = np.random.default_rng(seed)
    largest = -math.inf
    zero_images = 0
    for sample in range(samples):
        x = trajectory_service.random_vector(rng, log_R, log_R, pool)
        ratio = log_ratio(x, params)
        if ratio is None:
            zero_images += 1
            continue
        if ratio > ceiling:
            return CertificateReport(certificate, FAIL, tolerance=CANONICAL_RATIO_TOL, witness={
                'direction': sample,
                'log_ratio': ratio,
                'log_ceiling': ceiling,
            })
        largest = max(largest, ratio)

    return CertificateReport(certificate, PASS, tolerance=CANONICAL_RATIO_TOL, details={
        'k': k,
        'log_R': log_R,
        'canonical_log_ratio': canonical,
        'canonical_relative_error': canonical_error,
        'max_sampled_log_ratio': largest if largest > -math.inf else None,
        'log_ceiling': ceiling,
        'zero_images': zero_images,
        'samples': samples,
    })


def validate_loglog_exponents(c1: float, c2: float, params: Params = DEFAULT_PARAMS) -> None:
    critical = params.log_K / math.log(2.0)
    if not 0.0 < c1 < critical < c2:
        raise UsageError(
            f"log-log exponents need 0 < c1 < ln K / ln 2 = {critical:.6f} < c2 (got c1={c1}, c2={c2})"
        )


def check_loglog_bound(c1: float, c2: float, k_min: int = 10, k_max: int = 40,
                       params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """(-log||x||)^(-c2) < ||N(x)||/||x|| and 4 eps_(k-2) < 4 (-log||x||)^(-c1) at canonical witnesses.

    Reports k0, the smallest tested k from which both sides hold for every
    larger tested k.
    """
    certificate = 'loglog_bound'
    validate_loglog_exponents(c1, c2, params)
    if k_min < 3 or k_max < k_min:
        raise UsageError(f"log-log range needs 3 <= k_min <= k_max (got {k_min}..{k_max})")

    holds = {}
    for k in range(k_min, k_max + 1):
        log_R = nonlinear_map.band_radius(k, params=params)
        ratio = log_ratio(canonical_witness(k, log_R), params)
        log_depth = math.log(-log_R)
        lower = -c2 * log_depth < ratio
        upper = epsilon(k - 2, params).log_mag < -c1 * log_depth
        holds[k] = lower and upper

    k0 = None
    for k in range(k_max, k_min - 1, -1):
        if not holds[k]:
            break
        k0 = k
    details = {
        'c1': c1,
        'c2': c2,
        'k_min': k_min,
        'k_max': k_max,
        'k0': k0,
        'failing_k': [k for k, ok in holds.items() if not ok],
    }
    if k0 is None:
        return CertificateReport(certificate, FAIL, witness={'k': k_max, 'reason': 'bound fails at k_max'},
                                 details=details)
    return CertificateReport(certificate, PASS, details=details)


# =============================================================================
# DERIVATIVE CERTIFICATES
# =============================================================================

def _central_difference(x: SparseVec, y: SparseVec, log_h: float, params: Params,
                        counter: Optional[CancellationCounter] = None) -> SparseVec:
    h = LogScalar(1, log_h)
    forward = nonlinear_map.T(sparse_l2.axpy(h, y, x, counter), params)
    backward = nonlinear_map.T(sparse_l2.axpy(-h, y, x, counter), params)
    difference = sparse_l2.sub(forward, backward, counter)
    return sparse_l2.scale(LogScalar(1, -math.log(2.0) - log_h), difference)


def richardson_difference(x: SparseVec, y: SparseVec, log_h: float,
                          params: Params = DEFAULT_PARAMS,
                          counter: Optional[CancellationCounter] = None) -> SparseVec:
    """(4 D(h/2) - D(h)) / 3 from two central differences"""
    coarse = _central_difference(x, y, log_h, params, counter)
    fine = _central_difference(x, y, log_h - math.log(2.0), params, counter)
    return sparse_l2.axpy(
        LogScalar(-1, -math.log(3.0)), coarse,
        sparse_l2.scale(LogScalar(1, math.log(4.0 / 3.0)), fine),
        counter,
    )


def fd_relative_error(x: SparseVec, y: SparseVec, params: Params = DEFAULT_PARAMS,
                      step: float = FD_STEP,
                      counter: Optional[CancellationCounter] = None) -> float:
    """||FD - DT(x)y|| / max(||DT(x)y||, ||y||) with h = step * ||x||"""
    log_h = math.log(step) + (0.0 if x.is_zero else sparse_l2.norm(x).log_mag)
    exact = nonlinear_map.DT_apply(x, y, params, counter)
    approx = richardson_difference(x, y, log_h, params, counter)
    error = sparse_l2.norm(sparse_l2.sub(approx, exact, counter))
    if error.is_zero:
        return 0.0
    scale = max(sparse_l2.norm(exact).log_mag if not exact.is_zero else -math.inf,
                sparse_l2.norm(y).log_mag)
    return math.exp(error.log_mag - scale)


def dn_zero_witness(k_min: int = 3, k_max: int = 12,
                    params: Params = DEFAULT_PARAMS) -> Dict[str, object]:
    """Canonical ratios at shrinking radii: each <= 4 eps_(k-2) and strictly decreasing"""
    ratios = []
    ok = True
    for k in range(k_min, k_max + 1):
        ratio = log_ratio(canonical_witness(k, nonlinear_map.band_radius(k, params=params)), params)
        ceiling = math.log(4.0) + epsilon(k - 2, params).log_mag
        if ratio is None or ratio > ceiling or (ratios and not ratio < ratios[-1]):
            ok = False
        ratios.append(ratio)
    return {'ok': ok, 'log_ratios': ratios}


def fd_derivative_check(points: Union[int, Sequence[SparseVec]] = 20, tol: float = FD_TOLERANCE,
                        seed: int = 7, params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """Closed-form DT(x)y against Richardson-extrapolated central differences.

    An integer draws that many points with ||x|| in [M^(-16), M^(-4)); each
    point is tested along x/||x|| and along one random unit direction.
    Points below M^(-16) are not applicable.
    """
    certificate = 'fd_derivative'
    rng = np.random.default_rng(seed)
    if isinstance(points, int):
        points = [
            trajectory_service.random_vector(
                rng, nonlinear_map.band_edge(4, params), nonlinear_map.band_edge(2, params))
            for _ in range(points)
        ]

    floor = nonlinear_map.band_edge(4, params)
    per_point = []
    cancellations = CancellationCounter()
    worst = 0.0
    for index, x in enumerate(points):
        log_t = None if x.is_zero else sparse_l2.norm(x).log_mag
        if log_t is None or not floor <= log_t <= FD_LOG_CEILING:
            per_point.append({'point': index, 'status': NOT_APPLICABLE.value})
            continue
        directions = {
            'radial': sparse_l2.normalize(x),
            'random': trajectory_service.random_vector(rng, 0.0, 0.0),
        }
        errors = {}
        for name, y in directions.items():
            error = fd_relative_error(x, y, params, counter=cancellations)
            errors[name] = error
            if error > tol:
                return CertificateReport(certificate, FAIL, tolerance=tol, witness={
                    'point': index,
                    'direction': name,
                    'log_norm': log_t,
                    'relative_error': error,
                })
            worst = max(worst, error)
        per_point.append({'point': index, 'status': PASS.value, 'log_norm': log_t, 'errors': errors})

    witness = dn_zero_witness(params=params)
    if not witness['ok']:
        return CertificateReport(certificate, FAIL, tolerance=tol, witness={
            'reason': 'canonical ratios do not shrink within 4 eps_(k-2)',
            'log_ratios': witness['log_ratios'],
        })

    if cancellations.count:
        logger.info("fd_derivative: %d near-total cancellations", cancellations.count)
    applicable = [p for p in per_point if p['status'] == PASS.value]
    status = PASS if applicable else NOT_APPLICABLE
    return CertificateReport(certificate, status, tolerance=tol, details={
        'points': per_point,
        'max_relative_error': worst,
        'cancellations': cancellations.count,
        'dn_zero_log_ratios': witness['log_ratios'],
    })


def dn_norm_estimate(x: SparseVec, samples: int, rng: np.random.Generator,
                     params: Params = DEFAULT_PARAMS) -> LogScalar:
    """max ||DN(x)y|| over canonical level directions and random unit directions"""
    band = nonlinear_map.active_set(sparse_l2.norm(x).log_mag, params)
    directions = [sparse_l2.basis(1 << (j - 1)) for j in band.k_list]
    pool = sorted(set(range(1, trajectory_service.MAX_INDEX + 1)) | set(_mask_positions(band.k_list)))
    directions.extend(trajectory_service.random_vector(rng, 0.0, 0.0, pool) for _ in range(samples))

    best = LogScalar.zero()
    for y in directions:
        image = nonlinear_map.DN_apply(x, y, params)
        if image.is_zero:
            continue
        value = sparse_l2.norm(image)
        if logspace.compare(value, best) > 0:
            best = value
    return best


def check_derivative_bounds(k_min: int = 3, k_max: int = 12, samples: int = 50, seed: int = 7,
                            params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """||DN(x)|| estimates at band midpoints: below the summed level bounds and
    12 eps_(k-2), and nonincreasing in k"""
    certificate = 'derivative_bounds'
    if k_min < 3 or k_max < k_min:
        raise UsageError(f"derivative bounds need 3 <= k_min <= k_max (got {k_min}..{k_max})")
    rng = np.random.default_rng(seed)

    rows = []
    previous = None
    for k in range(k_min, k_max + 1):
        log_t = nonlinear_map.band_radius(k, params=params)
        x = sparse_l2.basis(1, LogScalar(1, log_t))
        estimate = dn_norm_estimate(x, samples, rng, params).log_mag
        cap = nonlinear_map.dn_cap(log_t, params).log_mag
        limit = math.log(12.0) + epsilon(k - 2, params).log_mag
        row = {'k': k, 'log_estimate': estimate, 'log_cap': cap, 'log_limit': limit}
        if estimate > cap + LOG_COMPARE_SLACK or estimate > limit:
            return CertificateReport(certificate, FAIL, witness=dict(row, reason='estimate above bound'))
        if previous is not None and estimate > previous + LOG_COMPARE_SLACK:
            return CertificateReport(certificate, FAIL, witness=dict(row, reason='estimate increased',
                                                                     log_previous=previous))
        previous = estimate
        rows.append(row)
    return CertificateReport(certificate, PASS, tolerance=LOG_COMPARE_SLACK, details={'bands': rows})


# =============================================================================
# LINEAR-PART CERTIFICATES
# =============================================================================

def linear_instability_demo(p_max: int = 12, params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """||W_eps^(2^p-1) e_1||^(1/(2^p-1)) for p <= p_max from the actual orbit of e_1.

    Passes iff every rate with p >= 3 exceeds 1.05 and, when p_max >= 12,
    the last rate is within 1% of M/K.
    """
    certificate = 'linear_instability'
    if p_max < 3:
        raise UsageError(f"p_max must be >= 3 (got {p_max})")
    op = shift_operators.w_epsilon(params)
    x = sparse_l2.basis(1)
    rates = {}
    n = 0
    for p in range(1, p_max + 1):
        target = (1 << p) - 1
        while n < target:
            x = shift_operators.apply(op, x)
            n += 1
        log_norm = sparse_l2.norm(x).log_mag
        rates[p] = math.exp(log_norm / target)
        closed = shift_operators.wn_norm_closed(p, params).log_mag
        if abs(log_norm - closed) > LOG_COMPARE_SLACK * max(1.0, abs(closed)):
            return CertificateReport(certificate, FAIL, witness={
                'p': p, 'log_orbit_norm': log_norm, 'log_closed_form': closed,
            })

    limit = shift_operators.spectral_radius(params)
    for p in range(3, p_max + 1):
        if not rates[p] > 1.05:
            return CertificateReport(certificate, FAIL, witness={'p': p, 'rate': rates[p], 'floor': 1.05})
    if p_max >= 12 and abs(rates[p_max] - limit) > 0.01 * limit:
        return CertificateReport(certificate, FAIL, witness={'p': p_max, 'rate': rates[p_max], 'limit': limit})
    return CertificateReport(certificate, PASS, tolerance=0.01, details={
        'rates': {str(p): rate for p, rate in rates.items()},
        'spectral_radius': limit,
    })


def check_spectral_radius(p_max: int = 40, params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """rho_estimate(p) decreases to M/K with log gap exactly p ln K / (2^p - 1)"""
    certificate = 'spectral_radius'
    if p_max < 1:
        raise UsageError(f"p must be >= 1 (got {p_max})")
    limit = shift_operators.spectral_radius(params)
    log_limit = math.log(limit)
    values = []
    for p in range(1, p_max + 1):
        value = shift_operators.rho_estimate(p, params)
        gap = p * params.log_K / (2.0 ** p - 1.0)
        if abs(math.log(value) - log_limit - gap) > LOG_COMPARE_SLACK:
            return CertificateReport(certificate, FAIL, witness={'p': p, 'rho': value, 'log_gap': gap})
        if values and not value < values[-1]:
            return CertificateReport(certificate, FAIL, witness={'p': p, 'rho': value, 'previous': values[-1]})
        values.append(value)
    return CertificateReport(certificate, PASS, tolerance=LOG_COMPARE_SLACK, details={
        'p_max': p_max,
        'last': values[-1],
        'limit': limit,
        'abs_error': abs(values[-1] - limit),
    })


def check_norm_identities(p_max: int = 6, params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """||W_eps^(2^p-1)|| three ways: closed form, sliding windows, prefix product"""
    certificate = 'norm_identities'
    op = shift_operators.w_epsilon(params)
    rows = []
    for p in range(1, p_max + 1):
        n = (1 << p) - 1
        closed = shift_operators.wn_norm_closed(p, params)
        windowed = shift_operators.op_norm_power(op, n, 4 << p)
        prefix = LogScalar(1, math.fsum(alpha(i, params).log_mag for i in range(1, n + 1)))
        for name, value in (('windowed', windowed), ('prefix', prefix)):
            error = logspace.relative_log_error(value, closed)
            if error > CANONICAL_RATIO_TOL:
                return CertificateReport(certificate, FAIL, tolerance=CANONICAL_RATIO_TOL, witness={
                    'p': p, 'form': name, 'log_value': value.log_mag, 'log_closed_form': closed.log_mag,
                })
        rows.append({'p': p, 'log_norm': closed.log_mag})
    return CertificateReport(certificate, PASS, tolerance=CANONICAL_RATIO_TOL, details={'powers': rows})


def check_nilpotency(m_max: int = 8, basis_max: int = 512,
                     params: Params = DEFAULT_PARAMS) -> CertificateReport:
    """(W_eps - L_m)^(2^m) kills e_1..e_basis_max and (W_eps - L_m)^(2^m - 1) does not.

    Also multiplies 2^3 effective shifts taken alternately from bands 3 and
    4, all of which lie in Omega_3.
    """
    certificate = 'nilpotency'
    if m_max < 1:
        raise UsageError(f"m_max must be >= 1 (got {m_max})")
    basis_range = range(1, basis_max + 1)
    indices = {}
    for m in range(1, m_max + 1):
        op = shift_operators.complement(m, params)
        period = 1 << m
        if not shift_operators.verify_nilpotent_set([op] * period, m, basis_range):
            return CertificateReport(certificate, FAIL, witness={'m': m, 'applications': period})
        if shift_operators.verify_nilpotent_set([op] * (period - 1), m, basis_range):
            return CertificateReport(certificate, FAIL, witness={
                'm': m, 'applications': period - 1, 'reason': 'index below 2^m',
            })
        indices[str(m)] = period

    shifts = [
        nonlinear_map.effective_shift(nonlinear_map.band_radius(3 + i % 2, 0.25 + 0.1 * i, params), params)
        for i in range(8)
    ]
    if not shift_operators.verify_nilpotent_set(shifts, 3, basis_range):
        return CertificateReport(certificate, FAIL, witness={'reason': 'mixed effective shifts survive'})
    return CertificateReport(certificate, PASS, details={
        'index': indices,
        'basis_max': basis_max,
        'mixed_effective_shifts': len(shifts),
    })


# =============================================================================
# SUITES
# =============================================================================

def combine(certificate: str, reports: Sequence[CertificateReport]) -> CertificateReport:
    """One report for a certificate run over many trajectories"""
    counts = {status.value: 0 for status in CertificateStatus}
    for index, report in enumerate(reports):
        counts[report.status.value] += 1
        if report.status is FAIL:
            return CertificateReport(certificate, FAIL, tolerance=report.tolerance,
                                     witness=dict(report.witness, trajectory=index), details=counts)
    status = PASS if counts[PASS.value] else NOT_APPLICABLE
    tolerance = max((r.tolerance for r in reports), default=0.0)
    return CertificateReport(certificate, status, tolerance=tolerance, details=counts)


class CertificateService:
    SUITES = ('bounds', 'derivative', 'exponential', 'linear-instability', 'nilpotency', 'stability')

    def __init__(self, params: Params = DEFAULT_PARAMS, seed: int = 7, steps: int = 20000):
        self.params = params
        self.seed = seed
        self.steps = steps

        # Suite sizes (can be overridden)
        self.trajectories = 100
        self.bands = tuple(range(3, 13))
        self.ratio_bands = tuple(range(3, 31))
        self.ratio_samples = 200
        self.c1 = 1.2
        self.c2 = 1.8
        self.loglog_range = (10, 40)
        self.fd_points = 20
        self.derivative_bands = (3, 12)
        self.m_max = 8
        self.basis_max = 512
        self.p_max = 12
        self.spectral_p = 40
        self.worked_exponent = 257

    def _stamp(self, report: CertificateReport, started: float) -> CertificateReport:
        report.params = self.params.to_dict()
        report.seed = self.seed
        report.runtime_ms = (time.perf_counter() - started) * 1000.0
        logger.info("%s: %s", report.certificate, report.status.value)
        return report

    def initial_vectors(self) -> List[SparseVec]:
        """The seeded random x_0 set, cycling through self.bands"""
        rng = np.random.default_rng(self.seed)
        return [
            trajectory_service.random_initial_vector(rng, self.bands[i % len(self.bands)], self.params)
            for i in range(self.trajectories)
        ]

    def worked_instance(self) -> SparseVec:
        """M^(-257) e_1"""
        return sparse_l2.basis(1, LogScalar(1, -self.worked_exponent * self.params.log_M))

    def _trajectory_suite(self, checks: Dict[str, Callable]) -> List[CertificateReport]:
        started = time.perf_counter()
        collected: Dict[str, List[CertificateReport]] = {name: [] for name in checks}
        for index, x0 in enumerate(self.initial_vectors()):
            records = trajectory_service.run_trajectory(x0, self.steps, self.params)
            logger.debug("trajectory %d: %d records", index, len(records))
            for name, check in checks.items():
                collected[name].append(check(records))
        return [self._stamp(combine(name, reports), started) for name, reports in collected.items()]

    def stability_suite(self) -> List[CertificateReport]:
        p = self.params
        reports = self._trajectory_suite({
            'stability': lambda r: check_stability(r, params=p),
            'growth_cap': lambda r: check_growth_cap(r, p),
            'band_dwell': lambda r: check_band_dwell(r, p),
            'band_exits': lambda r: check_band_exits(r, p),
        })
        started = time.perf_counter()
        records = trajectory_service.run_trajectory(self.worked_instance(), self.steps, p)
        worked = check_stability(records, params=p)
        worked.certificate = 'stability_worked_instance'
        worked.details['log_x0'] = records[0].log_norm
        reports.append(self._stamp(worked, started))
        return reports

    def exponential_suite(self) -> List[CertificateReport]:
        p = self.params
        reports = self._trajectory_suite({'exponential': lambda r: check_exponential(r, p)})
        started = time.perf_counter()
        block = combine('exponential_blockwise', [
            check_exponential(trajectory_service.blockwise_bound_records(k, 4 << k, p), p)
            for k in range(3, 8)
        ])
        reports.append(self._stamp(block, started))
        return reports

    def bounds_suite(self) -> List[CertificateReport]:
        validate_loglog_exponents(self.c1, self.c2, self.params)
        reports = []
        for k in self.ratio_bands:
            started = time.perf_counter()
            log_R = nonlinear_map.band_radius(k, params=self.params)
            reports.append(self._stamp(
                check_ratio_band(k, log_R, self.ratio_samples, self.seed + k, self.params), started))
        started = time.perf_counter()
        k_min, k_max = self.loglog_range
        reports.append(self._stamp(check_loglog_bound(self.c1, self.c2, k_min, k_max, self.params), started))
        return reports

    def derivative_suite(self) -> List[CertificateReport]:
        started = time.perf_counter()
        fd = self._stamp(fd_derivative_check(self.fd_points, FD_TOLERANCE, self.seed, self.params), started)
        started = time.perf_counter()
        k_min, k_max = self.derivative_bands
        bounds = self._stamp(check_derivative_bounds(k_min, k_max, seed=self.seed, params=self.params), started)
        return [fd, bounds]

    def nilpotency_suite(self) -> List[CertificateReport]:
        started = time.perf_counter()
        return [self._stamp(check_nilpotency(self.m_max, self.basis_max, self.params), started)]

    def linear_instability_suite(self) -> List[CertificateReport]:
        reports = []
        for check in (lambda: linear_instability_demo(self.p_max, self.params),
                      lambda: check_spectral_radius(self.spectral_p, self.params),
                      lambda: check_norm_identities(params=self.params)):
            started = time.perf_counter()
            reports.append(self._stamp(check(), started))
        return reports

    def run_suite(self, name: str) -> List[CertificateReport]:
        """Run one named suite, or every suite for 'all'; reports sorted by certificate id"""
        runners = {
            'bounds': self.bounds_suite,
            'derivative': self.derivative_suite,
            'exponential': self.exponential_suite,
            'linear-instability': self.linear_instability_suite,
            'nilpotency': self.nilpotency_suite,
            'stability': self.stability_suite,
        }
        if name == 'all':
            selected = list(self.SUITES)
        elif name in runners:
            selected = [name]
        else:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(self.SUITES)} or all")

        reports = []
        for suite in selected:
            logger.info("running suite %s (seed %d)", suite, self.seed)
            reports.extend(runners[suite]())
        return sorted(reports, key=lambda r: r.certificate)
