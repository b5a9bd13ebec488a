"""
Test script to verify trajectories of T, the block bound sequence and the
linear-scale cross-check
"""
import math

import pytest

from src.exceptions import UsageError
from src.models.log_scalar import LogScalar
from src.services import nonlinear_map, sparse_l2, trajectory_service
from src.services.linear_oracle import SMALLEST_TRUSTED_NORM, linear_trajectory, to_linear

LOG5 = math.log(5.0)


def worked_instance():
    return sparse_l2.basis(1, LogScalar(1, -257.0 * LOG5))


def test_zero_vector_gives_single_zero_record(params):
    records = trajectory_service.run_trajectory(sparse_l2.zero_vector(), 10, params)
    assert len(records) == 1
    assert records[0].is_zero
    assert records[0].to_dict()['log10_norm'] == "ZERO"


def test_unit_vector_grows_by_alpha_one(params):
    records = trajectory_service.run_trajectory(sparse_l2.basis(1), 1, params)
    assert records[1].log_norm == pytest.approx(LOG5)
    assert records[1].support_min == records[1].support_max == 2
    assert records[1].band_k is None


def test_zero_steps_records_only_x0(params):
    records = trajectory_service.run_trajectory(worked_instance(), 0, params)
    assert [r.step for r in records] == [0]
    assert records[0].band_k == 8


def test_negative_steps_rejected(params):
    with pytest.raises(ValueError):
        trajectory_service.run_trajectory(sparse_l2.basis(1), -1, params)


def test_initial_norm_must_be_finite_and_representable(params):
    too_deep = 2.0 * nonlinear_map.band_edge(nonlinear_map.DEEPEST_BAND, params)
    for log_norm in (-math.inf, math.nan, too_deep):
        with pytest.raises(UsageError):
            trajectory_service.run_trajectory(sparse_l2.basis(1, LogScalar(1, log_norm)), 3, params)


def test_deepest_band_still_runs(params):
    log_norm = nonlinear_map.band_radius(nonlinear_map.DEEPEST_BAND - 1, 0.5, params)
    records = trajectory_service.run_trajectory(sparse_l2.basis(1, LogScalar(1, log_norm)), 3, params)
    assert records[0].band_k == nonlinear_map.DEEPEST_BAND - 1
    assert len(records) == 4


def test_worked_instance_is_annihilated_below_level_bound(params):
    records = trajectory_service.run_trajectory(worked_instance(), 20000, params)
    assert records[-1].is_zero
    assert records[-1].step <= 64
    live = [r for r in records if not r.is_zero]
    assert max(r.log_norm for r in live) < -128.0 * LOG5
    for previous, current in zip(live, live[1:]):
        assert current.log_norm <= previous.log_norm + LOG5 + 1e-9


def test_records_carry_reference_bounds(params):
    records = trajectory_service.run_trajectory(worked_instance(), 3, params)
    log_x0 = -257.0 * LOG5
    assert records[0].quarter_bound == pytest.approx(0.25 * log_x0)
    assert records[2].decay_bound == pytest.approx(-LOG5 + 0.125 * log_x0)
    row = records[2].to_dict()
    assert row['bound_32_log10'] == pytest.approx(0.25 * log_x0 / math.log(10.0))


def test_random_initial_vector_lands_in_band(params, rng):
    for band in (3, 5, 12):
        x = trajectory_service.random_initial_vector(rng, band, params)
        assert nonlinear_map.band_index(sparse_l2.norm(x).log_mag, params) == band
        assert 1 <= len(x) <= trajectory_service.MAX_SUPPORT
        assert all(1 <= n <= trajectory_service.MAX_INDEX for n in x.support)


def test_random_vector_respects_index_pool(rng):
    x = trajectory_service.random_vector(rng, -1.0, -1.0, [3, 5, 7])
    assert set(x.support) <= {3, 5, 7}
    assert sparse_l2.norm(x).log_mag == pytest.approx(-1.0)


def test_bounding_exponents_blocks():
    assert trajectory_service.bounding_exponents(2, 10) == [4, 4, 4, 4, 8, 8, 8, 8, 8, 8]
    with pytest.raises(ValueError):
        trajectory_service.bounding_exponents(-1, 3)


@pytest.mark.parametrize("k", [0, 3, 6])
def test_bounding_exponents_block_starts(k):
    exponents = trajectory_service.bounding_exponents(k, 8 << k)
    for j in range(3):
        start = (1 << k) * ((1 << j) - 1)
        assert exponents[start] == 1 << (k + j)
        # last term of block j: a = (count + 2^k) / 2 with count the 1-based position
        count = (1 << k) * ((2 << j) - 1)
        assert exponents[count - 1] == (count + (1 << k)) // 2


def test_blockwise_records_meet_exponential_bound(params):
    records = trajectory_service.blockwise_bound_records(3, 32, params)
    log_x0 = records[0].log_norm
    assert log_x0 == pytest.approx(-8.0 * LOG5)
    for record in records:
        assert record.log_norm <= -0.5 * record.step * LOG5 + 0.125 * log_x0


def test_band_exits_for_worked_instance(params):
    records = trajectory_service.run_trajectory(worked_instance(), 20000, params)
    exits = trajectory_service.band_exits(records, params)
    assert exits[0] == (0, 7)
    assert exits[-1] == (records[-1].step, None)
    assert exits[-1][0] - exits[0][0] <= 1 << 7


def test_band_exits_increase_on_random_trajectories(params, rng):
    for band in range(3, 9):
        x0 = trajectory_service.random_initial_vector(rng, band, params)
        records = trajectory_service.run_trajectory(x0, 20000, params)
        exits = trajectory_service.band_exits(records, params)
        levels = [k for _, k in exits if k is not None]
        assert levels == sorted(set(levels))
        assert levels[0] == band - 1


def test_band_exits_empty_above_band_two(params):
    records = trajectory_service.run_trajectory(sparse_l2.basis(1, LogScalar(1, -3.0 * LOG5)), 5, params)
    assert trajectory_service.band_exits(records, params) == []


@pytest.mark.parametrize("band", [1, 2, 3, 4])
def test_log_engine_matches_linear_scale(params, rng, band):
    for _ in range(5):
        x0 = trajectory_service.random_vector(
            rng,
            nonlinear_map.band_edge(band + 1, params),
            nonlinear_map.band_edge(band, params),
            range(1, 9),
        )
        records = trajectory_service.run_trajectory(x0, 200, params)
        norms = linear_trajectory(to_linear(x0), 200, params)
        for i in range(min(len(records), len(norms))):
            expected = norms[i]
            if 0.0 < expected < SMALLEST_TRUSTED_NORM:
                break
            record = records[i]
            if record.is_zero or expected == 0.0:
                # a plateau edge may fall on different sides in the two scales
                if record.is_zero and expected != 0.0:
                    assert expected <= 1e-10 * norms[i - 1]
                elif not record.is_zero:
                    assert math.exp(record.log_norm) <= 1e-10 * norms[i - 1]
                break
            assert math.exp(record.log_norm) == pytest.approx(expected, rel=1e-10)
