"""仿真引擎测试"""
import io
import math

import numpy as np
import pytest

from irsa_aoi_sim.analysis.aoi_models import at_irsa_aoi_approx
from irsa_aoi_sim.models.access_data import AnalyticInput, Protocol, SimConfig, ThresholdFeedback
from irsa_aoi_sim.models.errors import ConfigurationError
from irsa_aoi_sim.simulation.protocols import (
    AgeThresholdActivation,
    FrameSimulator,
    IidActivation,
    compute_threshold,
    run_at_irsa,
    run_irsa,
    run_protocol,
    run_slotted_aloha,
)


def make_config(dist, protocol=Protocol.IRSA, **fields):
    values = dict(num_users=200, frame_slots=20, target_load=0.5, distribution=dist,
                  total_frames=2000, seed=99, protocol=protocol)
    values.update(fields)
    return SimConfig(**values)


@pytest.mark.parametrize('aoi, m, load, expected', [
    ([10, 10, 20, 20, 30, 30, 40, 40], 10, 0.5, (10, 5 / 6, 6)),
    ([10] * 8, 10, 0.8, (0, 1.0, 8)),
    ([10, 20], 10, 0.1, (10, 1.0, 1)),
])
def test_compute_threshold(aoi, m, load, expected):
    feedback = compute_threshold(aoi, m, load)
    theta, p, n = expected
    assert feedback.threshold_slots == theta
    assert feedback.barring_probability == pytest.approx(p)
    assert feedback.eligible_count == n


def test_threshold_rejects_impossible_target():
    with pytest.raises(ValueError):
        compute_threshold([10, 10], 10, 0.3)


def test_single_user_irsa_sawtooth(x3):
    config = make_config(x3, num_users=1, frame_slots=10, target_load=0.1, total_frames=100)
    metrics = run_irsa(config)
    assert metrics.throughput == pytest.approx(0.1)
    assert metrics.avg_network_aoi == pytest.approx(15.0)
    assert metrics.per_frame_success_prob == 1.0


def test_zero_load_never_updates(x3):
    metrics = run_irsa(make_config(x3, target_load=0.0))
    assert metrics.throughput == 0.0
    assert metrics.transmitted_total == 0
    assert math.isinf(metrics.avg_network_aoi)


def test_engines_check_protocol(x3):
    with pytest.raises(ConfigurationError):
        run_irsa(make_config(x3, Protocol.AT_IRSA))
    with pytest.raises(ConfigurationError):
        run_at_irsa(make_config(x3, Protocol.IRSA))
    with pytest.raises(ConfigurationError):
        run_slotted_aloha(make_config(x3, Protocol.IRSA))


def test_same_seed_same_metrics(x3):
    config = make_config(x3, Protocol.AT_IRSA, total_frames=500)
    assert run_protocol(config) == run_protocol(config)
    other = run_protocol(config.with_overrides(seed=100))
    assert other.avg_network_aoi != run_protocol(config).avg_network_aoi


def test_metric_bounds(x3):
    for protocol in (Protocol.IRSA, Protocol.AT_IRSA):
        metrics = run_protocol(make_config(x3, protocol))
        m = metrics.frame_slots
        assert 0.0 <= metrics.throughput <= 1.0
        assert 0.0 <= metrics.per_frame_success_prob <= 1.0
        assert metrics.avg_network_aoi >= m
        assert metrics.normalized_aoi == pytest.approx(metrics.avg_network_aoi / metrics.num_users, rel=1e-12)


@pytest.mark.parametrize('protocol', [Protocol.IRSA, Protocol.AT_IRSA])
def test_aoi_ledger_and_sawtooth_identity(x3, protocol):
    """逐帧推进：AoI = m·(距上次译出的帧数)，面积 = Σ(m·Y + Y²/2) + 末段"""
    config = make_config(x3, protocol, num_users=60, frame_slots=10, target_load=0.6,
                         total_frames=400, warmup_frames=0)
    activation = IidActivation(config) if protocol is Protocol.IRSA else AgeThresholdActivation(config)
    sim = FrameSimulator(config, activation)
    m = config.frame_slots
    frames_since = np.ones(config.num_users, dtype=np.int64)
    last_update = np.zeros(config.num_users)
    expected_area = np.zeros(config.num_users)

    for _ in range(config.total_frames):
        step = sim.step()
        frames_since += 1
        frames_since[step.decoded] = 1
        end = (step.frame_index + 1) * m
        for user in step.decoded.tolist():
            gap = end - last_update[user]
            expected_area[user] += m * gap + gap * gap / 2.0
            last_update[user] = end
        assert np.array_equal(sim.aoi, m * frames_since)

    tail = config.total_frames * m - last_update
    expected_area += m * tail + tail * tail / 2.0
    assert np.allclose(sim.acc.per_node_area, expected_area)
    assert sim.acc.window_slots == config.total_frames * m


def test_at_irsa_load_targeting(x3):
    config = make_config(x3, Protocol.AT_IRSA, total_frames=5000)
    metrics = run_at_irsa(config)
    target = config.target_transmitters
    realized = metrics.realized_load * config.frame_slots
    assert abs(realized - target) <= 4 * math.sqrt(target / metrics.measured_frames)


def test_at_irsa_trace_reports_feedback(x3):
    config = make_config(x3, Protocol.AT_IRSA, total_frames=50)
    trace = io.StringIO()
    run_at_irsa(config, trace)
    lines = trace.getvalue().splitlines()
    assert lines[0] == 'frame,transmitters,decoded,theta,p'
    assert len(lines) == 51
    frame, transmitters, decoded, theta, p = lines[-1].split(',')
    assert int(decoded) <= int(transmitters)
    assert int(theta) >= 0 and 0 < float(p) <= 1


def test_custom_threshold_policy_forces_iid_thinning(x3):
    config = make_config(x3, Protocol.AT_IRSA, total_frames=300)

    def uniform(aoi, m, load):
        return ThresholdFeedback(0, m * load / aoi.size, aoi.size)

    trace = io.StringIO()
    run_at_irsa(config, trace, threshold_policy=uniform)
    assert all(line.split(',')[3] == '0' for line in trace.getvalue().splitlines()[1:])


def test_two_users_match_analytic(x3):
    config = make_config(x3, Protocol.AT_IRSA, num_users=2, frame_slots=10, target_load=0.2,
                         total_frames=5000)
    metrics = run_at_irsa(config)
    analytic = at_irsa_aoi_approx(AnalyticInput(10, 2, 0.2, metrics.per_frame_success_prob))
    assert metrics.transmitted_total == 2 * metrics.measured_frames
    assert abs(analytic - metrics.avg_network_aoi) / metrics.avg_network_aoi <= 0.10


def test_slotted_aloha_single_user(x1):
    config = make_config(x1, Protocol.SLOTTED_ALOHA, num_users=1, frame_slots=1, target_load=1.0,
                         total_frames=1000)
    metrics = run_slotted_aloha(config)
    assert metrics.throughput == 1.0
    assert metrics.avg_network_aoi == pytest.approx(1.5)


def test_slotted_aloha_small_population(x1):
    config = make_config(x1, Protocol.SLOTTED_ALOHA, num_users=10, frame_slots=10, target_load=1.0,
                         total_frames=20_000)
    metrics = run_slotted_aloha(config)
    assert metrics.measured_frames == (config.total_frames - config.warmup_frames) * 10
    assert metrics.throughput == pytest.approx(0.9 ** 9, abs=0.01)
    assert metrics.avg_network_aoi == pytest.approx(0.5 + 10 / metrics.throughput, rel=0.05)
