"""
单帧译码成功概率 p_s 与峰值负载 G* 的蒙特卡洛估计
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from irsa_aoi_sim.analysis.sic_decoder import decode_frame
from irsa_aoi_sim.config.logging_config import logger
from irsa_aoi_sim.config.settings import AnalyticConfig, SimulationConfig
from irsa_aoi_sim.models.access_data import DegreeDistribution, FrameOccupancy
from irsa_aoi_sim.threads.worker_threads import ReplicationWorkerPool
from irsa_aoi_sim.utils.random_streams import (
    StreamPurpose,
    place_replicas_batch,
    sample_degrees,
    spawn_stream,
)


@dataclass(frozen=True)
class PsEstimate:
    """p_s 估计值及其标准误（比值估计）"""
    value: float
    std_error: float
    trials: int
    transmitted: int
    decoded: int

    def __float__(self) -> float:
        return self.value


@dataclass
class _TrialTotals:
    """比值估计的充分统计量，可交换、可结合地合并"""
    trials: int = 0
    decoded: int = 0
    transmitted: int = 0
    decoded_sq: float = 0.0
    transmitted_sq: float = 0.0
    cross: float = 0.0

    def add(self, decoded: int, transmitted: int) -> None:
        self.trials += 1
        self.decoded += decoded
        self.transmitted += transmitted
        self.decoded_sq += decoded * decoded
        self.transmitted_sq += transmitted * transmitted
        self.cross += decoded * transmitted

    def merge(self, other: '_TrialTotals') -> '_TrialTotals':
        return _TrialTotals(self.trials + other.trials, self.decoded + other.decoded,
                            self.transmitted + other.transmitted, self.decoded_sq + other.decoded_sq,
                            self.transmitted_sq + other.transmitted_sq, self.cross + other.cross)

    def estimate(self) -> PsEstimate:
        if self.transmitted == 0:
            return PsEstimate(float('nan'), float('nan'), self.trials, 0, 0)
        ratio = self.decoded / self.transmitted
        std_error = 0.0
        if self.trials > 1:
            residual_sq = self.decoded_sq - 2.0 * ratio * self.cross + ratio * ratio * self.transmitted_sq
            mean_tx = self.transmitted / self.trials
            std_error = math.sqrt(max(residual_sq, 0.0) / (self.trials * (self.trials - 1))) / mean_tx
        return PsEstimate(ratio, std_error, self.trials, self.transmitted, self.decoded)


def transmitters_for_load(m: int, load: float) -> int:
    """固定发送者数 round(m·G)（四舍五入）"""
    return int(math.floor(m * load + 0.5 + SimulationConfig.LOAD_TOLERANCE))


def _run_trials(m: int, dist: DegreeDistribution, load: float, trials: int,
                stream: np.random.Generator, fixed_count: bool,
                num_users: Optional[int]) -> _TrialTotals:
    totals = _TrialTotals()
    fixed = transmitters_for_load(m, load)
    for _ in range(trials):
        if fixed_count:
            count = fixed
        else:
            count = int(stream.binomial(num_users, min(1.0, m * load / num_users)))
        if count == 0:
            totals.add(0, 0)
            continue
        degrees = sample_degrees(dist, count, stream)
        placements = place_replicas_batch(degrees, m, stream)
        outcome = decode_frame(FrameOccupancy(m, tuple(enumerate(placements))))
        totals.add(outcome.num_decoded, count)
    return totals


def _check_ps_args(m: int, load: float, trials: int, fixed_count: bool, num_users: Optional[int]) -> None:
    if trials <= 0:
        raise ValueError(f"试验次数必须>0: {trials}")
    if fixed_count and transmitters_for_load(m, load) < 1:
        raise ValueError(f"m·G* = {m * load:g} 不足一个发送者")
    if not fixed_count and (num_users is None or num_users < 1):
        raise ValueError("二项发送者数模式需要给出终端数 num_users")


def estimate_ps(m: int, dist: DegreeDistribution, load: float, trials: int,
                stream: np.random.Generator, fixed_count: bool = True,
                num_users: Optional[int] = None) -> PsEstimate:
    """
    估计目标负载下单个数据包在一帧内被译出的概率 p_s

    每次试验放入 round(m·G*) 个用户（fixed_count=False 时改为
    Binomial(num_users, m·G*/num_users)），各自抽取副本数并放置后剥离译码，
    返回 译出总数/发送总数 及标准误。

    Raises:
        ValueError: trials = 0 或 m·G* < 1
    """
    _check_ps_args(m, load, trials, fixed_count, num_users)
    estimate = _run_trials(m, dist, load, trials, stream, fixed_count, num_users).estimate()
    logger.debug(f"p_s(m={m}, G={load:g}) = {estimate.value:.6f} ± {estimate.std_error:.2e}")
    return estimate


def _ps_chunk(task: Tuple) -> _TrialTotals:
    m, dist, load, trials, seed, keys, fixed_count, num_users = task
    return _run_trials(m, dist, load, trials, spawn_stream(seed, *keys), fixed_count, num_users)


def estimate_ps_parallel(m: int, dist: DegreeDistribution, load: float, trials: int, seed: int,
                         workers: int = 1, fixed_count: bool = True, num_users: Optional[int] = None,
                         stream_keys: Tuple[int, ...] = ()) -> PsEstimate:
    """
    按固定块大小把试验拆分到独立随机流上并行执行

    结果只取决于 (输入, 种子)，与进程数无关。
    """
    _check_ps_args(m, load, trials, fixed_count, num_users)
    chunk = AnalyticConfig.PS_CHUNK_TRIALS
    tasks = []
    for index, start in enumerate(range(0, trials, chunk)):
        keys = (StreamPurpose.PS_ESTIMATE, *stream_keys, index)
        tasks.append((m, dist, load, min(chunk, trials - start), seed, keys, fixed_count, num_users))
    totals = _TrialTotals()
    for part in ReplicationWorkerPool(workers).imap(_ps_chunk, tasks):
        totals = totals.merge(part)
    return totals.estimate()


@dataclass
class PeakLoadResult:
    """峰值负载搜索结果；curve 为 (G, S, p_s) 全曲线"""
    peak_load: float
    peak_throughput: float
    curve: List[Tuple[float, float, float]] = field(default_factory=list)


def find_peak_load(m: int, dist: DegreeDistribution, grid: Sequence[float], trials: int,
                   seed: int = SimulationConfig.DEFAULT_SEED, workers: int = 1,
                   fixed_count: bool = True) -> PeakLoadResult:
    """
    在负载网格上寻找使 S = G·p_s(G) 最大的负载

    Args:
        m: 帧长
        dist: 副本数分布
        grid: 候选负载
        trials: 每个负载点的试验次数
        seed: 主种子；第 i 个网格点使用键 (PEAK_SEARCH, i) 派生的随机流

    Returns:
        PeakLoadResult: (G*, S*) 及全曲线
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("负载网格为空")

    curve = []
    for index, load in enumerate(grid):
        if transmitters_for_load(m, load) < 1:
            curve.append((load, 0.0, float('nan')))
            continue
        ps = estimate_ps_parallel(m, dist, load, trials, seed, workers, fixed_count,
                                  stream_keys=(StreamPurpose.PEAK_SEARCH, index))
        curve.append((load, load * ps.value, ps.value))
        logger.info(f"m={m}, G={load:.3f}: p_s={ps.value:.4f}, S={load * ps.value:.4f}")

    best = max(range(len(curve)), key=lambda i: (curve[i][1], -i))
    peak_load, peak_throughput, _ = curve[best]
    logger.info(f"峰值负载 G*={peak_load:g}, S*={peak_throughput:.4f} (m={m}, {dist})")
    return PeakLoadResult(peak_load, peak_throughput, curve)
