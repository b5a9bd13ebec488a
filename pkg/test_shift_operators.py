"""
Test script to verify weighted shifts, power norms and nilpotency
"""
import math

import pytest

from src.exceptions import OmegaCertificationError, UsageError
from src.services import logspace, shift_operators
from src.models.log_scalar import LogScalar
from src.models.sparse_vec import SparseVec
from src.services.kakutani_weights import alpha, epsilon, lm_hits
from src.services.sparse_l2 import basis


def test_apply_moves_entries_right(params):
    image = shift_operators.apply(shift_operators.w_epsilon(params), basis(1))
    assert image.support == (2,)
    assert image[2].to_real() == pytest.approx(5.0)


def test_truncation_keeps_single_level(params):
    l1 = shift_operators.truncation(1, params)
    assert shift_operators.apply(l1, basis(2)).is_zero
    assert shift_operators.apply(l1, basis(3))[4].to_real() == pytest.approx(5.0)


def test_apply_product_applies_last_operator_first(params):
    w = shift_operators.w_epsilon(params)
    l2 = shift_operators.truncation(2, params)
    image = shift_operators.apply_product([l2, w], basis(1))
    assert image[3].to_real() == pytest.approx(25.0 / 3.0)
    assert shift_operators.apply_product([w, l2], basis(1)).is_zero


def test_op_norm_power_cube(params):
    w = shift_operators.w_epsilon(params)
    assert shift_operators.op_norm_power(w, 3, 1000).to_real() == pytest.approx(125.0 / 3.0)


def test_op_norm_power_of_nilpotent_complement(params):
    c2 = shift_operators.complement(2, params)
    assert shift_operators.op_norm_power(c2, 4, 100).is_zero
    assert not shift_operators.op_norm_power(c2, 3, 100).is_zero


def test_op_norm_power_preconditions(params):
    w = shift_operators.w_epsilon(params)
    with pytest.raises(UsageError):
        shift_operators.op_norm_power(w, 0, 10)
    with pytest.raises(UsageError):
        shift_operators.op_norm_power(w, 8, 4)


def test_wn_norm_closed(params):
    assert shift_operators.wn_norm_closed(2, params).to_real() == pytest.approx(125.0 / 3.0)
    with pytest.raises(UsageError):
        shift_operators.wn_norm_closed(0, params)


@pytest.mark.parametrize("p", range(1, 7))
def test_norm_identities(params, p):
    n = (1 << p) - 1
    closed = shift_operators.wn_norm_closed(p, params)
    windowed = shift_operators.op_norm_power(shift_operators.w_epsilon(params), n, 4 << p)
    prefix = math.fsum(alpha(i, params).log_mag for i in range(1, n + 1))
    assert logspace.relative_log_error(windowed, closed) <= 1e-12
    assert prefix == pytest.approx(closed.log_mag, rel=1e-12)


def test_rho_estimate(params):
    assert shift_operators.rho_estimate(2, params) == pytest.approx((125.0 / 3.0) ** (1.0 / 3.0))
    assert shift_operators.rho_estimate(2, params) == pytest.approx(3.4668, abs=1e-4)
    assert abs(shift_operators.rho_estimate(40, params) - 5.0 / 3.0) <= 1e-9
    with pytest.raises(UsageError):
        shift_operators.rho_estimate(0, params)


@pytest.mark.parametrize("p", [1, 3, 5, 10])
def test_rho_gap_is_exact(params, p):
    gap = math.log(shift_operators.rho_estimate(p, params)) - math.log(5.0 / 3.0)
    assert gap == pytest.approx(p * math.log(3.0) / (2.0 ** p - 1.0), abs=1e-12)


def test_spectral_radius(params):
    assert shift_operators.spectral_radius(params) == pytest.approx(5.0 / 3.0)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_complement_nilpotent_of_index_two_to_m(params, m):
    op = shift_operators.complement(m, params)
    period = 1 << m
    assert shift_operators.verify_nilpotent_set([op] * period, m, range(1, 65))
    assert not shift_operators.verify_nilpotent_set([op] * (period - 1), m, range(1, 65))


@pytest.mark.slow
@pytest.mark.parametrize("m", range(1, 9))
def test_complement_nilpotency_full_basis(params, m):
    op = shift_operators.complement(m, params)
    period = 1 << m
    assert shift_operators.verify_nilpotent_set([op] * period, m, range(1, 513))
    assert not shift_operators.verify_nilpotent_set([op] * (period - 1), m, range(1, 513))


def test_nilpotency_requires_omega_membership(params):
    c2 = shift_operators.complement(2, params)
    ops = [c2, shift_operators.w_epsilon(params), c2, c2]
    with pytest.raises(OmegaCertificationError) as excinfo:
        shift_operators.verify_nilpotent_set(ops, 2, range(1, 17))
    assert excinfo.value.failed_indices == [1]


def test_empty_basis_range_is_vacuous(params):
    assert shift_operators.verify_nilpotent_set([shift_operators.w_epsilon(params)], 1, [])


def test_single_step_norm_is_exact_at_long_horizon(params):
    w = shift_operators.w_epsilon(params)
    assert shift_operators.op_norm_power(w, 1, 1 << 16).log_mag == epsilon(1, params).log_mag
    assert shift_operators.op_norm_power(w, 1, 4096) == shift_operators.op_norm_power(w, 1, 1 << 15)


@pytest.mark.slow
def test_single_step_norm_is_exact_at_two_million(params):
    w = shift_operators.w_epsilon(params)
    assert shift_operators.op_norm_power(w, 1, 1 << 21).log_mag == epsilon(1, params).log_mag


@pytest.mark.parametrize("m", range(1, 13))
def test_truncation_norm_and_complement_bound(params, m):
    horizon = 4 << m
    w_norm = shift_operators.op_norm_power(shift_operators.w_epsilon(params), 1, 4096)
    complement_norm = shift_operators.op_norm_power(shift_operators.complement(m, params), 1, horizon)
    truncation_norm = shift_operators.op_norm_power(shift_operators.truncation(m, params), 1, horizon)
    assert logspace.compare(complement_norm, w_norm) <= 0
    assert truncation_norm.log_mag == epsilon(m, params).log_mag


@pytest.mark.slow
@pytest.mark.parametrize("m", range(13, 21))
def test_truncation_norm_and_complement_bound_deep_levels(params, m):
    horizon = 1 << m
    w_norm = shift_operators.op_norm_power(shift_operators.w_epsilon(params), 1, 4096)
    complement_norm = shift_operators.op_norm_power(shift_operators.complement(m, params), 1, horizon)
    truncation_norm = shift_operators.op_norm_power(shift_operators.truncation(m, params), 1, horizon)
    assert logspace.compare(complement_norm, w_norm) <= 0
    assert truncation_norm.log_mag == epsilon(m, params).log_mag


@pytest.mark.parametrize("m", range(1, 9))
def test_complement_power_vanishes_at_index(params, m):
    op = shift_operators.complement(m, params)
    period = 1 << m
    assert shift_operators.op_norm_power(op, period, 4 * period).is_zero
    assert not shift_operators.op_norm_power(op, period - 1, 4 * period).is_zero


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_shift_image_support(params, rng, m):
    op = shift_operators.complement(m, params)
    for _ in range(20):
        support = sorted(int(n) for n in rng.choice(range(1, 129), size=10, replace=False))
        x = SparseVec({n: LogScalar(1, -float(n)) for n in support})
        image = shift_operators.apply(op, x)
        assert list(image.support) == [n + 1 for n in support if not lm_hits(m, n)]
