"""
帧同步仿真引擎

- IRSA: 每帧每个节点以概率 G·m/U 独立激活
- AT-IRSA: 接收端按上一帧边界的AoI向量计算 (Θ, p)，仅 AoI > Θ 的节点以概率 p 发送
- 时隙ALOHA: 每个时隙每个节点以概率 1/U 发送，恰有一个发送者时成功
"""
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TextIO, Tuple

import numpy as np

from irsa_aoi_sim.analysis.sic_decoder import decode_frame
from irsa_aoi_sim.config.logging_config import logger
from irsa_aoi_sim.config.settings import SimulationConfig
from irsa_aoi_sim.models.access_data import (
    FrameOccupancy,
    Protocol,
    RunMetrics,
    SimConfig,
    ThresholdFeedback,
)
from irsa_aoi_sim.models.errors import ConfigurationError
from irsa_aoi_sim.simulation.aoi_tracker import (
    AoiAccumulator,
    accumulate_aoi,
    advance_aoi,
    initial_aoi,
)
from irsa_aoi_sim.utils.random_streams import (
    StreamPurpose,
    place_replicas_batch,
    sample_degrees,
    spawn_stream,
)

ThresholdPolicy = Callable[[np.ndarray, int, float], ThresholdFeedback]

_EMPTY = np.zeros(0, dtype=np.int64)


def compute_threshold(aoi_values: Sequence[int], frame_slots: int, target_load: float) -> ThresholdFeedback:
    """
    计算年龄门限 Θ 与接入概率 p

    n(θ) = |{u : aoi_u > θ}|，候选门限为 0 与当前出现的各个AoI值；
    取满足 n(θ) >= m·G* 的最大候选作为 Θ，p = m·G*/n(Θ)。

    Args:
        aoi_values: 各节点当前AoI
        frame_slots: 帧长 m
        target_load: 目标负载 G*

    Returns:
        ThresholdFeedback: (Θ, p, n(Θ))
    """
    values = np.asarray(aoi_values)
    num_users = values.size
    target = frame_slots * target_load
    required = max(1, math.ceil(target - SimulationConfig.LOAD_TOLERANCE))
    if required > num_users:
        raise ValueError(f"m·G* = {target:g} 超过终端数 {num_users}")

    distinct, counts = np.unique(values, return_counts=True)
    above = num_users - np.cumsum(counts)
    feasible = np.flatnonzero(above >= required)
    if feasible.size:
        index = feasible[-1]
        threshold = int(distinct[index])
        eligible = int(above[index])
    else:
        threshold = 0
        eligible = int(np.count_nonzero(values > 0))
        if eligible < required:
            raise ValueError(f"不存在满足 n(θ) >= {target:g} 的门限（AoI>0 的节点仅 {eligible} 个）")
    return ThresholdFeedback(threshold_slots=threshold,
                             barring_probability=min(1.0, target / eligible),
                             eligible_count=eligible)


class IidActivation:
    """IRSA：独立同分布激活，概率 q = G·m/U"""

    def __init__(self, config: SimConfig):
        self.probability = min(1.0, config.target_transmitters / config.num_users)

    def __call__(self, aoi: np.ndarray, stream: np.random.Generator) -> Tuple[np.ndarray, Optional[ThresholdFeedback]]:
        if self.probability <= 0.0:
            return _EMPTY, None
        return np.flatnonzero(stream.random(aoi.size) < self.probability), None


class AgeThresholdActivation:
    """AT-IRSA：门限 + 接入概率"""

    def __init__(self, config: SimConfig, threshold_policy: Optional[ThresholdPolicy] = None):
        self.frame_slots = config.frame_slots
        self.target_load = config.target_load
        self.threshold_policy = threshold_policy or compute_threshold

    def __call__(self, aoi: np.ndarray, stream: np.random.Generator) -> Tuple[np.ndarray, Optional[ThresholdFeedback]]:
        feedback = self.threshold_policy(aoi, self.frame_slots, self.target_load)
        eligible = np.flatnonzero(aoi > feedback.threshold_slots)
        if eligible.size == 0:
            return _EMPTY, feedback
        draws = stream.random(eligible.size)
        return eligible[draws < feedback.barring_probability], feedback


@dataclass
class FrameStep:
    """单帧的仿真结果"""
    frame_index: int
    transmitters: np.ndarray
    decoded: np.ndarray
    feedback: Optional[ThresholdFeedback]
    measured: bool


class FrameSimulator:
    """
    帧同步仿真器：一个实例拥有一次重复实验和一条随机流，严格顺序推进
    """

    def __init__(self, config: SimConfig, activation, stream: Optional[np.random.Generator] = None):
        self.config = config
        self.activation = activation
        self.stream = stream if stream is not None else spawn_stream(config.seed, StreamPurpose.SIMULATION)
        self.aoi = initial_aoi(config.num_users, config.frame_slots)
        self.acc = AoiAccumulator.create(config.num_users)
        self.frame_index = 0
        self.transmitted_total = 0
        self.decoded_total = 0
        self.load_sum = 0.0
        self.measured_frames = 0

    def step(self) -> FrameStep:
        """推进一帧：选择发送者 → 放置副本 → SIC译码 → 累加AoI → 更新AoI"""
        config = self.config
        m = config.frame_slots
        transmitters, feedback = self.activation(self.aoi, self.stream)

        decoded = _EMPTY
        frame_load = 0.0
        if transmitters.size:
            degrees = sample_degrees(config.distribution, transmitters.size, self.stream)
            placements = place_replicas_batch(degrees, m, self.stream)
            frame = FrameOccupancy(m, tuple(zip(transmitters.tolist(), placements)))
            frame_load = frame.instantaneous_load
            outcome = decode_frame(frame)
            if outcome.decoded_users:
                decoded = np.fromiter(sorted(outcome.decoded_users), dtype=np.int64,
                                      count=len(outcome.decoded_users))

        measured = self.frame_index >= config.warmup_frames
        if measured:
            accumulate_aoi(self.aoi, decoded, m, self.acc)
            self.transmitted_total += int(transmitters.size)
            self.decoded_total += int(decoded.size)
            self.load_sum += frame_load
            self.measured_frames += 1

        advance_aoi(self.aoi, decoded, m)
        step = FrameStep(self.frame_index, transmitters, decoded, feedback, measured)
        self.frame_index += 1
        return step

    def run(self, trace: Optional[TextIO] = None) -> RunMetrics:
        """运行全部帧并返回统计结果"""
        config = self.config
        logger.info(f"开始仿真 {config}")
        started = time.perf_counter()
        if trace is not None:
            trace.write("frame,transmitters,decoded,theta,p\n")

        while self.frame_index < config.total_frames:
            step = self.step()
            if trace is not None:
                theta = '' if step.feedback is None else step.feedback.threshold_slots
                prob = '' if step.feedback is None else f"{step.feedback.barring_probability:.10g}"
                trace.write(f"{step.frame_index},{step.transmitters.size},{step.decoded.size},{theta},{prob}\n")

        metrics = self.metrics()
        logger.info(f"仿真完成 ({time.perf_counter() - started:.1f}s): {metrics.get_summary()}")
        return metrics

    def metrics(self) -> RunMetrics:
        config = self.config
        frames = self.measured_frames
        window = frames * config.frame_slots
        avg_aoi = self.acc.average_network_aoi()
        return RunMetrics(
            protocol=config.protocol,
            num_users=config.num_users,
            frame_slots=config.frame_slots,
            throughput=self.decoded_total / window if window else 0.0,
            avg_network_aoi=avg_aoi,
            normalized_aoi=avg_aoi / config.num_users,
            realized_load=self.load_sum / frames if frames else 0.0,
            per_frame_success_prob=(self.decoded_total / self.transmitted_total
                                    if self.transmitted_total else 0.0),
            measured_frames=frames,
            transmitted_total=self.transmitted_total,
            decoded_total=self.decoded_total,
            window_slots=window,
            updated_nodes=int(np.count_nonzero(self.acc.per_node_update_count)),
        )


def _require_protocol(config: SimConfig, protocol: Protocol) -> None:
    if config.protocol is not protocol:
        raise ConfigurationError(f"配置协议为 {config.protocol.value}，此引擎只支持 {protocol.value}")


def run_irsa(config: SimConfig, trace: Optional[TextIO] = None) -> RunMetrics:
    """
    IRSA 仿真（i.i.d. 激活）

    Raises:
        ConfigurationError: 协议不是 IRSA
    """
    _require_protocol(config, Protocol.IRSA)
    return FrameSimulator(config, IidActivation(config)).run(trace)


def run_at_irsa(config: SimConfig, trace: Optional[TextIO] = None,
                threshold_policy: Optional[ThresholdPolicy] = None) -> RunMetrics:
    """
    AT-IRSA 仿真，target_load 作为 G*

    Args:
        config: 仿真配置
        trace: 可选逐帧输出 `frame,transmitters,decoded,theta,p`
        threshold_policy: 门限计算函数，默认 compute_threshold

    Raises:
        ConfigurationError: 协议不是 AT-IRSA
    """
    _require_protocol(config, Protocol.AT_IRSA)
    return FrameSimulator(config, AgeThresholdActivation(config, threshold_policy)).run(trace)


def run_slotted_aloha(config: SimConfig, trace: Optional[TextIO] = None) -> RunMetrics:
    """
    时隙ALOHA 基线仿真

    仿真 total_frames·m 个时隙（前 warmup_frames·m 个为预热），服务时间为1个时隙，
    成功后AoI重置为1。每个时隙的发送者数服从 Binomial(U, 1/U)；恰有一个发送者时
    按对称性均匀选出成功节点。AoI 采用事件驱动的梯形积分，与逐时隙累加等价。

    Raises:
        ConfigurationError: 协议不是时隙ALOHA
    """
    _require_protocol(config, Protocol.SLOTTED_ALOHA)
    logger.info(f"开始仿真 {config}")
    started = time.perf_counter()

    U = config.num_users
    m = config.frame_slots
    total_slots = config.total_frames * m
    warmup_slots = config.warmup_frames * m
    stream = spawn_stream(config.seed, StreamPurpose.SIMULATION)
    access_prob = 1.0 / U
    chunk = m * max(1, SimulationConfig.SA_CHUNK_SLOTS // m)

    # 以 Python 列表做逐事件更新
    anchor_time = [0] * U
    anchor_aoi = [1] * U
    area = [0.0] * U
    updates = [0] * U
    window_open = warmup_slots == 0
    transmitted = 0
    successes = 0

    if trace is not None:
        trace.write("frame,transmitters,decoded,theta,p\n")

    for chunk_start in range(0, total_slots, chunk):
        size = min(chunk, total_slots - chunk_start)
        counts = stream.binomial(U, access_prob, size=size)
        success_slots = np.flatnonzero(counts == 1)
        winners = stream.integers(0, U, size=success_slots.size)

        if trace is not None:
            per_frame_tx = counts.reshape(-1, m).sum(axis=1)
            per_frame_ok = (counts == 1).reshape(-1, m).sum(axis=1)
            first_frame = chunk_start // m
            for offset, (tx, ok) in enumerate(zip(per_frame_tx.tolist(), per_frame_ok.tolist())):
                trace.write(f"{first_frame + offset},{tx},{ok},,{access_prob:.10g}\n")

        measured_from = max(0, warmup_slots - chunk_start)
        if measured_from < size:
            transmitted += int(counts[measured_from:].sum())

        for slot, user in zip((success_slots + chunk_start).tolist(), winners.tolist()):
            if not window_open and slot >= warmup_slots:
                _open_window(anchor_time, anchor_aoi, warmup_slots)
                window_open = True
            end = slot + 1
            if window_open:
                gap = end - anchor_time[user]
                start = anchor_aoi[user]
                area[user] += gap * start + 0.5 * gap * gap
                updates[user] += 1
                successes += 1
            anchor_time[user] = end
            anchor_aoi[user] = 1

    if not window_open:
        _open_window(anchor_time, anchor_aoi, warmup_slots)

    acc = AoiAccumulator(per_node_area=np.asarray(area, dtype=float),
                         per_node_update_count=np.asarray(updates, dtype=np.int64),
                         window_slots=total_slots - warmup_slots)
    gaps = total_slots - np.asarray(anchor_time, dtype=float)
    acc.add_gap(np.arange(U), np.asarray(anchor_aoi, dtype=float), gaps)

    measured_slots = total_slots - warmup_slots
    avg_aoi = acc.average_network_aoi()
    metrics = RunMetrics(
        protocol=config.protocol,
        num_users=U,
        frame_slots=m,
        throughput=successes / measured_slots,
        avg_network_aoi=avg_aoi,
        normalized_aoi=avg_aoi / U,
        realized_load=transmitted / measured_slots,
        per_frame_success_prob=successes / transmitted if transmitted else 0.0,
        measured_frames=measured_slots,
        transmitted_total=transmitted,
        decoded_total=successes,
        window_slots=measured_slots,
        updated_nodes=int(np.count_nonzero(acc.per_node_update_count)),
    )
    logger.info(f"仿真完成 ({time.perf_counter() - started:.1f}s): {metrics.get_summary()}")
    return metrics


def _open_window(anchor_time, anchor_aoi, window_start: int) -> None:
    """测量窗口开始：把每个节点的锚点平移到窗口起点"""
    for user in range(len(anchor_time)):
        anchor_aoi[user] += window_start - anchor_time[user]
        anchor_time[user] = window_start


ENGINES = {
    Protocol.IRSA: run_irsa,
    Protocol.AT_IRSA: run_at_irsa,
    Protocol.SLOTTED_ALOHA: run_slotted_aloha,
}


def run_protocol(config: SimConfig, trace: Optional[TextIO] = None) -> RunMetrics:
    """按配置中的协议选择仿真引擎"""
    return ENGINES[config.protocol](config, trace)
