"""
Test script to verify signed log-domain arithmetic
"""
import math

import pytest

from src.models.log_scalar import LogScalar, ONE, ZERO
from src.services import logspace


def real(value):
    return LogScalar.from_real(value)


def test_mul_div():
    assert logspace.mul(real(-2.0), real(3.0)).to_real() == pytest.approx(-6.0)
    assert logspace.mul(real(2.0), ZERO).is_zero
    assert logspace.div(real(6.0), real(-3.0)).to_real() == pytest.approx(-2.0)
    with pytest.raises(ZeroDivisionError):
        logspace.div(ONE, ZERO)


def test_power():
    assert logspace.power(real(4.0), 0.5).to_real() == pytest.approx(2.0)
    with pytest.raises(ValueError):
        logspace.power(real(-4.0), 0.5)


def test_add_same_and_opposite_signs():
    assert logspace.add(real(2.0), real(3.0)).to_real() == pytest.approx(5.0)
    assert logspace.add(real(3.0), real(-2.0)).to_real() == pytest.approx(1.0)
    assert logspace.add(real(-3.0), real(2.0)).to_real() == pytest.approx(-1.0)
    assert logspace.sub(real(2.0), real(2.0)) == ZERO


def test_add_exact_zero_is_identity():
    x = LogScalar(-1, -7.5)
    assert logspace.add(ZERO, x) == x
    assert logspace.add(x, ZERO) == x


def test_add_far_apart_magnitudes():
    total = logspace.add(LogScalar(1, -1e9), ONE)
    assert total == ONE


def test_deep_cancellation_keeps_a_finite_result():
    a = LogScalar(1, -1e6)
    b = LogScalar(-1, -1e6 - 1e-3)
    total = logspace.add(a, b)
    assert total.sign == 1
    assert total.log_mag == pytest.approx(-1e6 + math.log(-math.expm1(-1e-3)), abs=1e-6)


def test_cancellation_counter():
    counter = logspace.CancellationCounter()
    logspace.add(LogScalar(1, 1.0), LogScalar(-1, math.nextafter(1.0, 0.0)), counter)
    logspace.add(real(3.0), real(-1.0), counter)
    assert counter.count == 1


def test_log_sum_exp_sq():
    assert logspace.log_sum_exp_sq([real(3.0), real(-4.0)]).to_real() == pytest.approx(5.0)
    assert logspace.log_sum_exp_sq([]) == ZERO
    assert logspace.log_sum_exp_sq([ZERO, ZERO]) == ZERO


def test_log_sum_exp_sq_single_term_is_exact():
    term = LogScalar(-1, -123456.789)
    assert logspace.log_sum_exp_sq([term]).log_mag == -123456.789


def test_log_sum_exp_sq_far_below_underflow():
    total = logspace.log_sum_exp_sq([LogScalar(1, -1e9), LogScalar(-1, -1e9)])
    assert total.log_mag == pytest.approx(-1e9 + 0.5 * math.log(2.0), abs=1e-6)


@pytest.mark.parametrize("a, b, expected", [
    (2.0, 3.0, -1),
    (-2.0, -3.0, 1),
    (0.0, -1.0, 1),
    (4.0, 4.0, 0),
    (0.0, 0.0, 0),
])
def test_compare(a, b, expected):
    assert logspace.compare(real(a), real(b)) == expected


def test_relative_log_error():
    assert logspace.relative_log_error(LogScalar(1, -100.0), LogScalar(1, -100.0)) == 0.0
    assert logspace.relative_log_error(LogScalar(1, -101.0), LogScalar(1, -100.0)) == pytest.approx(0.01)
    assert logspace.relative_log_error(ZERO, ONE) == math.inf


def test_log_sum_exp_sq_permutation_invariant(rng):
    for _ in range(50):
        terms = [LogScalar(int(s), float(m))
                 for s, m in zip(rng.choice([-1, 1], size=12), rng.uniform(-40.0, 10.0, size=12))]
        reference = logspace.log_sum_exp_sq(terms).log_mag
        shuffled = [terms[i] for i in rng.permutation(len(terms))]
        assert abs(logspace.log_sum_exp_sq(shuffled).log_mag - reference) <= 4 * math.ulp(reference)


@pytest.mark.parametrize("shift", [-1e6, -3.5, 0.25, 700.0])
def test_log_sum_exp_sq_scale_equivariant(shift):
    terms = [LogScalar(1, -1.5), LogScalar(-1, -3.25), LogScalar(1, -0.5), LogScalar(-1, -8.0)]
    base = logspace.log_sum_exp_sq(terms).log_mag
    scaled = [logspace.mul(LogScalar(1, shift), t) for t in terms]
    result = logspace.log_sum_exp_sq(scaled).log_mag
    assert abs(result - (base + shift)) <= 4 * math.ulp(base + shift)
