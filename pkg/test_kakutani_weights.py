"""
Test script to verify the Kakutani weight sequence and Omega_k membership
"""
import math

import pytest

from src.exceptions import InsufficientWindowError, ParamsError
from src.models.params import Params
from src.models.weight_profile import ProfileKind, WeightProfile
from src.services.kakutani_weights import (
    alpha, dyadic_valuation, epsilon, in_omega_k, lm_hits, profile_weight, profile_window,
)


@pytest.mark.parametrize("n, k", [(1, 0), (2, 1), (3, 0), (4, 2), (12, 2), (96, 5), (2 ** 40, 40)])
def test_dyadic_valuation(n, k):
    assert dyadic_valuation(n) == k


def test_dyadic_valuation_rejects_zero():
    with pytest.raises(ValueError):
        dyadic_valuation(0)


def test_params_require_m_above_k_above_one():
    with pytest.raises(ParamsError, match="M > K > 1"):
        Params(3.0, 5.0)
    with pytest.raises(ParamsError):
        Params(2.0, 1.0)
    assert Params(5.0, 3.0).log_M == math.log(5.0)


def test_epsilon_values(params):
    assert epsilon(1, params).to_real() == pytest.approx(5.0)
    assert epsilon(3, params).to_real() == pytest.approx(5.0 / 9.0)
    with pytest.raises(ValueError):
        epsilon(0, params)


def test_epsilon_stays_representable_deep_down(params):
    eps = epsilon(2000, params)
    assert eps.sign == 1
    assert eps.log_mag == pytest.approx(math.log(5.0) - 1999 * math.log(3.0))


@pytest.mark.parametrize("n, value", [(1, 5.0), (2, 5.0 / 3.0), (4, 5.0 / 9.0), (6, 5.0 / 3.0), (7, 5.0)])
def test_alpha(params, n, value):
    assert alpha(n, params).to_real() == pytest.approx(value)


def test_lm_mask_period_and_first_hit():
    hits = [n for n in range(1, 33) if lm_hits(3, n)]
    assert hits == [4, 12, 20, 28]
    with pytest.raises(ValueError):
        lm_hits(0, 1)


def test_complement_profile_zeroes_level(params):
    profile = WeightProfile(params, ProfileKind.COMPLEMENT, 2)
    assert profile_weight(profile, 2).is_zero
    assert profile_weight(profile, 6).is_zero
    assert profile_weight(profile, 1).to_real() == pytest.approx(5.0)
    assert profile.label == "W_eps - L_2"


def test_single_level_profile_keeps_only_level(params):
    profile = WeightProfile(params, ProfileKind.SINGLE_LEVEL, 1)
    window = profile_window(profile, 1, 9)
    assert [w.is_zero for w in window] == [False, True] * 4


def test_profile_validation(params):
    with pytest.raises(ValueError):
        WeightProfile(params, ProfileKind.FULL, m=1)
    with pytest.raises(ValueError):
        WeightProfile(params, ProfileKind.COMPLEMENT)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_complement_is_in_omega_m(params, m):
    profile = WeightProfile(params, ProfileKind.COMPLEMENT, m)
    assert in_omega_k(profile_window(profile, 1, 1 + 4 * (1 << m)), m)


def test_full_shift_is_not_in_omega(params):
    window = profile_window(WeightProfile(params), 1, 65)
    assert not any(in_omega_k(window, k) for k in range(1, 7))


def test_omega_window_offset(params):
    profile = WeightProfile(params, ProfileKind.COMPLEMENT, 3)
    assert in_omega_k(profile_window(profile, 5, 13), 3, start=5)


def test_short_window_cannot_certify(params):
    profile = WeightProfile(params, ProfileKind.COMPLEMENT, 3)
    with pytest.raises(InsufficientWindowError):
        in_omega_k(profile_window(profile, 1, 8), 3)


def eps_index(n, params):
    """m with alpha_n == eps_m, recovered from the log weights"""
    return round((params.log_M - alpha(n, params).log_mag) / params.log_K) + 1


@pytest.mark.parametrize("M, K", [(5.0, 3.0), (2.5, 1.5), (100.0, 7.0)])
def test_first_terms_follow_display_pattern(M, K):
    params = Params(M, K)
    expected = [1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5,
                1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1]
    assert [eps_index(n, params) for n in range(1, 32)] == expected


@pytest.mark.parametrize("m", range(1, 13))
def test_alpha_periodic_in_odd_part(params, m):
    for ell in range(20):
        assert alpha((1 << (m - 1)) * (2 * ell + 1), params) == epsilon(m, params)


def test_alpha_sixteen(params):
    assert alpha(16, params) == epsilon(5, params)
    assert alpha(16, params).to_real() == pytest.approx(5.0 / 81.0)


def trailing_zeros(n):
    count = 0
    while n % 2 == 0:
        n //= 2
        count += 1
    return count


def test_lm_mask_matches_valuation():
    for n in range(1, 1 << 12):
        zeros = trailing_zeros(n)
        assert dyadic_valuation(n) == zeros
        assert [m for m in range(1, 21) if lm_hits(m, n)] == ([zeros + 1] if zeros < 20 else [])


@pytest.mark.slow
def test_lm_mask_matches_valuation_to_one_million():
    for n in range(1, 10 ** 6 + 1):
        zeros = trailing_zeros(n)
        for m in range(1, 21):
            assert lm_hits(m, n) == (zeros == m - 1)
