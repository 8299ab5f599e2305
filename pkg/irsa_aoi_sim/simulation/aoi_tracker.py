"""
AoI 记账模块

瞬时AoI只在帧边界变化：译出的节点在帧末重置为 m，其余节点 +m。
时间平均采用连续时间梯形积分：一帧内 δ 从边界值以斜率1增长，
面积贡献 = m·δ_start + m²/2。
"""
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from irsa_aoi_sim.models.access_data import NodeState

AoiStates = Union[np.ndarray, Sequence[NodeState]]


@dataclass
class AoiAccumulator:
    """测量窗口内每个节点的AoI面积与更新次数"""
    per_node_area: np.ndarray
    per_node_update_count: np.ndarray
    window_slots: int = 0

    @classmethod
    def create(cls, num_users: int) -> 'AoiAccumulator':
        return cls(per_node_area=np.zeros(num_users, dtype=float),
                   per_node_update_count=np.zeros(num_users, dtype=np.int64),
                   window_slots=0)

    @property
    def num_users(self) -> int:
        return int(self.per_node_area.size)

    @property
    def total_updates(self) -> int:
        return int(self.per_node_update_count.sum())

    def node_average(self, user_id: int) -> float:
        """Δ_u：节点在窗口内的时间平均AoI"""
        if self.window_slots == 0:
            return float('nan')
        return float(self.per_node_area[user_id] / self.window_slots)

    def average_network_aoi(self) -> float:
        """
        Δ：所有节点时间平均AoI的均值

        窗口内没有任何更新时AoI发散，返回 inf。
        """
        if self.window_slots == 0 or self.total_updates == 0:
            return float('inf')
        return float(self.per_node_area.sum() / (self.num_users * self.window_slots))

    def add_gap(self, user_ids, start_aoi, gap_slots) -> None:
        """
        事件驱动记账：节点从 start_aoi 开始线性增长 gap_slots 个时隙

        面积 = gap·start + gap²/2
        """
        gap = np.asarray(gap_slots, dtype=float)
        np.add.at(self.per_node_area, user_ids, gap * np.asarray(start_aoi, dtype=float) + 0.5 * gap * gap)

    def merge(self, other: 'AoiAccumulator') -> 'AoiAccumulator':
        """合并两个（不同重复实验的）累加器：面积、次数、窗口长度分别相加"""
        if other.num_users != self.num_users:
            raise ValueError(f"节点数不一致: {self.num_users} vs {other.num_users}")
        return AoiAccumulator(per_node_area=self.per_node_area + other.per_node_area,
                              per_node_update_count=self.per_node_update_count + other.per_node_update_count,
                              window_slots=self.window_slots + other.window_slots)


def aoi_vector(states: AoiStates) -> np.ndarray:
    """把 NodeState 列表转换为按 user_id 索引的AoI数组；数组原样返回"""
    if isinstance(states, np.ndarray):
        return states
    aoi = np.zeros(len(states), dtype=np.int64)
    for state in states:
        aoi[state.user_id] = state.aoi_slots
    return aoi


def node_states(aoi: np.ndarray) -> List[NodeState]:
    return [NodeState(user_id=u, aoi_slots=int(value)) for u, value in enumerate(aoi)]


def initial_aoi(num_users: int, frame_slots: int) -> np.ndarray:
    """初始条件：所有节点 AoI = m（视作 t=0 时刚完成更新）"""
    return np.full(num_users, frame_slots, dtype=np.int64)


def accumulate_aoi(states: AoiStates, decoded, frame_slots: int,
                   acc: AoiAccumulator) -> AoiAccumulator:
    """
    累加一帧（m 个时隙）的AoI面积

    Args:
        states: 帧开始时刻各节点的AoI（NodeState 列表或数组）
        decoded: 本帧译出的节点编号
        frame_slots: 帧长 m
        acc: 累加器（原地更新）

    Returns:
        AoiAccumulator: 更新后的累加器
    """
    aoi = aoi_vector(states)
    m = float(frame_slots)
    acc.per_node_area += m * aoi + 0.5 * m * m
    decoded_idx = np.asarray(list(decoded) if not isinstance(decoded, np.ndarray) else decoded, dtype=np.int64)
    if decoded_idx.size:
        acc.per_node_update_count[decoded_idx] += 1
    acc.window_slots += int(frame_slots)
    return acc


def advance_aoi(aoi: np.ndarray, decoded_idx: np.ndarray, frame_slots: int) -> np.ndarray:
    """帧边界AoI更新：译出节点重置为 m，其余 +m（原地）"""
    aoi += frame_slots
    if decoded_idx.size:
        aoi[decoded_idx] = frame_slots
    return aoi
