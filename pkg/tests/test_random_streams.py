"""随机流、副本数抽样与副本放置测试"""
import numpy as np
import pytest

from irsa_aoi_sim.analysis.statistical_analysis import StatisticalAnalyzer
from irsa_aoi_sim.models.access_data import validate_distribution
from irsa_aoi_sim.models.errors import ConfigurationError
from irsa_aoi_sim.utils.random_streams import (
    StreamPurpose,
    derive_seed,
    place_replicas,
    place_replicas_batch,
    sample_degree,
    sample_degrees,
    spawn_stream,
)

from .helpers import slot_frequency_bounds


def test_streams_are_reproducible():
    a = spawn_stream(42, StreamPurpose.SIMULATION, 3).random(5)
    b = spawn_stream(42, StreamPurpose.SIMULATION, 3).random(5)
    c = spawn_stream(42, StreamPurpose.SIMULATION, 4).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_derived_seeds_are_distinct_uint64():
    seeds = {derive_seed(1, StreamPurpose.REPLICATION_SEED, point, rep)
             for point in range(10) for rep in range(10)}
    assert len(seeds) == 100
    assert all(0 <= seed < 2 ** 64 for seed in seeds)


def test_sample_degree_matches_batch_rule():
    dist = validate_distribution([(2, 0.5), (3, 0.28), (8, 0.22)])
    for seed in range(20):
        assert sample_degree(dist, spawn_stream(seed)) == int(sample_degrees(dist, 1, spawn_stream(seed))[0])


def test_degenerate_distribution_consumes_one_draw(x3):
    stream = spawn_stream(5)
    assert sample_degree(x3, stream) == 3
    reference = spawn_stream(5)
    reference.random()
    assert stream.random() == reference.random()


def test_sample_degree_goodness_of_fit():
    dist = validate_distribution([(2, 0.5), (3, 0.28), (8, 0.22)])
    samples = sample_degrees(dist, 1_000_000, spawn_stream(2024))
    _, p_value = StatisticalAnalyzer().degree_goodness_of_fit(samples, dist)
    assert p_value > 0.001


def test_place_replicas_distinct_and_in_range():
    stream = spawn_stream(7)
    for degree in (1, 3, 10):
        slots = place_replicas(degree, 10, stream)
        assert len(slots) == degree
        assert all(0 <= s < 10 for s in slots)
    with pytest.raises(ConfigurationError):
        place_replicas(11, 10, stream)
    with pytest.raises(ConfigurationError):
        place_replicas(0, 10, stream)


@pytest.mark.parametrize('degree, frame_slots', [(3, 12), (3, 5), (2, 40)])
def test_slot_frequencies_are_uniform(degree, frame_slots):
    samples = 20_000
    placements = place_replicas_batch([degree] * samples, frame_slots, spawn_stream(11, degree, frame_slots))
    counts = np.zeros(frame_slots)
    for slots in placements:
        assert len(slots) == degree
        counts[list(slots)] += 1
    low, high = slot_frequency_bounds(degree, frame_slots, samples)
    frequencies = counts / samples
    assert np.all(frequencies >= low) and np.all(frequencies <= high)


def test_batch_placement_keeps_input_order():
    degrees = [1, 3, 2, 3, 1]
    placements = place_replicas_batch(degrees, 8, spawn_stream(3))
    assert [len(p) for p in placements] == degrees
    assert place_replicas_batch([], 8, spawn_stream(3)) == []
    with pytest.raises(ConfigurationError):
        place_replicas_batch([9], 8, spawn_stream(3))
