"""p_s 估计与峰值负载搜索测试"""
import itertools

import pytest

from irsa_aoi_sim.analysis.sic_decoder import decode_frame
from irsa_aoi_sim.analysis.throughput_estimator import (
    PsEstimate,
    estimate_ps,
    estimate_ps_parallel,
    find_peak_load,
    transmitters_for_load,
)
from irsa_aoi_sim.models.access_data import FrameOccupancy
from irsa_aoi_sim.utils.random_streams import spawn_stream


def enumerate_ps(frame_slots, degree, users):
    """穷举所有等概率放置组合，得到精确的 p_s"""
    subsets = list(itertools.combinations(range(frame_slots), degree))
    decoded = transmitted = 0
    for placement in itertools.product(subsets, repeat=users):
        frame = FrameOccupancy.from_mapping(frame_slots, dict(enumerate(placement)))
        decoded += decode_frame(frame).num_decoded
        transmitted += users
    return decoded / transmitted


def test_enumeration_oracle():
    assert enumerate_ps(5, 3, 2) == pytest.approx(0.9)


def test_monte_carlo_matches_enumeration(x3):
    estimate = estimate_ps(5, x3, 0.4, 20_000, spawn_stream(17))
    assert estimate.trials == 20_000
    assert estimate.transmitted == 40_000
    assert abs(estimate.value - enumerate_ps(5, 3, 2)) <= 4 * estimate.std_error
    assert float(estimate) == estimate.value


def test_single_copy_single_user_always_decodes(x1):
    estimate = estimate_ps(100, x1, 0.01, 500, spawn_stream(1))
    assert estimate.value == 1.0
    assert estimate.std_error == 0.0


def test_estimate_errors(x3):
    with pytest.raises(ValueError):
        estimate_ps(100, x3, 0.66, 0, spawn_stream(1))
    with pytest.raises(ValueError):
        estimate_ps(100, x3, 0.001, 10, spawn_stream(1))
    with pytest.raises(ValueError):
        estimate_ps(100, x3, 0.66, 10, spawn_stream(1), fixed_count=False)


def test_transmitters_round_half_up():
    assert transmitters_for_load(100, 0.665) == 67
    assert transmitters_for_load(5, 0.4) == 2
    assert transmitters_for_load(1, 0.5) == 1


def test_parallel_estimate_independent_of_workers(x3):
    single = estimate_ps_parallel(20, x3, 0.5, 25_000, seed=3, workers=1)
    chunked = estimate_ps_parallel(20, x3, 0.5, 25_000, seed=3, workers=2)
    assert single == chunked
    assert isinstance(single, PsEstimate)


def test_binomial_transmitter_count(x3):
    estimate = estimate_ps(20, x3, 0.5, 2000, spawn_stream(4), fixed_count=False, num_users=100)
    assert 0.0 < estimate.value <= 1.0
    assert estimate.trials == 2000
    assert estimate.decoded <= estimate.transmitted


def test_degenerate_peak(x1):
    result = find_peak_load(1, x1, [0.5, 1.0], trials=100, seed=1)
    assert result.peak_load == 1.0
    assert result.peak_throughput == 1.0
    assert [g for g, _, _ in result.curve] == [0.5, 1.0]


def test_peak_ignores_empty_grid_points(x1):
    result = find_peak_load(10, x1, [0.01, 0.1], trials=50, seed=1)
    assert result.curve[0][1] == 0.0
    assert result.peak_load == 0.1
    with pytest.raises(ValueError):
        find_peak_load(10, x1, [], trials=50)


def test_success_probability_falls_with_load(x3):
    low = estimate_ps(50, x3, 0.4, 3000, spawn_stream(8))
    high = estimate_ps(50, x3, 0.9, 3000, spawn_stream(8))
    assert high.value + 3 * high.std_error < low.value
