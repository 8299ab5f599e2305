"""
随机流模块

所有随机操作都显式接收一个 numpy Generator。
划分规则：SeedSequence(entropy=主种子, spawn_key=(用途, 扫描点序号, 重复序号, ...))，
同一组键总是得到同一条独立的随机流，与调度顺序和并行度无关。
"""
from enum import IntEnum
from typing import FrozenSet, List, Sequence

import numpy as np

from irsa_aoi_sim.config.settings import SimulationConfig
from irsa_aoi_sim.models.access_data import DegreeDistribution
from irsa_aoi_sim.models.errors import ConfigurationError


class StreamPurpose(IntEnum):
    SIMULATION = 0
    PS_ESTIMATE = 1
    PEAK_SEARCH = 2
    REPLICATION_SEED = 3


def spawn_stream(seed: int, *keys: int) -> np.random.Generator:
    """由主种子和划分键生成独立随机流"""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(sequence))


def derive_seed(seed: int, *keys: int) -> int:
    """由主种子和划分键派生一个64位无符号子种子"""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def sample_degree(dist: DegreeDistribution, stream: np.random.Generator) -> int:
    """
    按 Λ 抽取副本数 ℓ

    每次调用恰好消耗一个均匀随机数（退化分布也一样）。
    """
    u = stream.random()
    index = int(np.searchsorted(dist.cumulative, u, side='right'))
    return int(dist.degrees[min(index, len(dist.entries) - 1)])


def sample_degrees(dist: DegreeDistribution, count: int, stream: np.random.Generator) -> np.ndarray:
    """批量抽取副本数，规则与 sample_degree 相同"""
    u = stream.random(count)
    index = np.searchsorted(dist.cumulative, u, side='right')
    return dist.degrees[np.minimum(index, len(dist.entries) - 1)]


def place_replicas(degree: int, frame_slots: int, stream: np.random.Generator) -> FrozenSet[int]:
    """
    在 m 个时隙中均匀随机选取 degree 个互不相同的时隙

    Raises:
        ConfigurationError: degree 不在 [1, m] 内
    """
    if degree < 1 or degree > frame_slots:
        raise ConfigurationError(f"副本数{degree}超出帧长范围 [1, {frame_slots}]")
    chosen = stream.choice(frame_slots, size=degree, replace=False)
    return frozenset(int(slot) for slot in chosen)


def _distinct_rows(count: int, degree: int, frame_slots: int,
                   stream: np.random.Generator) -> np.ndarray:
    """生成 count 行、每行 degree 个互不相同时隙索引的矩阵（每行在子集上均匀）"""
    if degree * SimulationConfig.REJECTION_FACTOR <= frame_slots:
        rows = stream.integers(0, frame_slots, size=(count, degree))
        while degree > 1:
            ordered = np.sort(rows, axis=1)
            bad = np.flatnonzero((np.diff(ordered, axis=1) == 0).any(axis=1))
            if bad.size == 0:
                break
            rows[bad] = stream.integers(0, frame_slots, size=(bad.size, degree))
        return rows
    keys = stream.random((count, frame_slots))
    return np.argpartition(keys, degree - 1, axis=1)[:, :degree]


def place_replicas_batch(degrees: Sequence[int], frame_slots: int,
                         stream: np.random.Generator) -> List[FrozenSet[int]]:
    """
    为一组终端批量放置副本

    按度数升序分组抽样，结果按输入顺序返回。
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    placements: List[FrozenSet[int]] = [frozenset()] * len(degrees)
    if degrees.size == 0:
        return placements
    if degrees.min() < 1 or degrees.max() > frame_slots:
        raise ConfigurationError(f"副本数超出帧长范围 [1, {frame_slots}]")

    for degree in np.unique(degrees):
        members = np.flatnonzero(degrees == degree)
        rows = _distinct_rows(members.size, int(degree), frame_slots, stream)
        for position, row in zip(members.tolist(), rows.tolist()):
            placements[position] = frozenset(row)
    return placements
