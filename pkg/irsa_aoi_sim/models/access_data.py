"""
随机接入数据模型
定义帧结构、副本分布、节点状态与仿真结果的数据结构
"""
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from irsa_aoi_sim.config.settings import SimulationConfig
from irsa_aoi_sim.models.errors import ConfigurationError, DistributionError

# Σ Λ_ℓ = 1 的容差
PROBABILITY_SUM_TOLERANCE = 1e-12


class Protocol(Enum):
    SLOTTED_ALOHA = "sa"
    IRSA = "irsa"
    AT_IRSA = "at-irsa"

    @classmethod
    def parse(cls, text: str) -> 'Protocol':
        """解析协议名称（大小写、下划线不敏感）"""
        key = str(text).strip().lower().replace('_', '-')
        aliases = {
            'sa': cls.SLOTTED_ALOHA,
            'aloha': cls.SLOTTED_ALOHA,
            'slotted-aloha': cls.SLOTTED_ALOHA,
            'slottedaloha': cls.SLOTTED_ALOHA,
            'irsa': cls.IRSA,
            'at-irsa': cls.AT_IRSA,
            'atirsa': cls.AT_IRSA,
        }
        if key not in aliases:
            raise ConfigurationError(f"不支持的协议: {text}")
        return aliases[key]


@dataclass(frozen=True)
class DegreeDistribution:
    """副本数分布 Λ(x) = Σ Λ_ℓ x^ℓ，所有终端共享"""
    entries: Tuple[Tuple[int, float], ...]

    @property
    def max_degree(self) -> int:
        return max(degree for degree, _ in self.entries)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([degree for degree, _ in self.entries], dtype=np.int64)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([prob for _, prob in self.entries], dtype=float)

    @property
    def cumulative(self) -> np.ndarray:
        cdf = np.cumsum(self.probabilities)
        cdf[-1] = 1.0
        return cdf

    def to_text(self) -> str:
        """序列化为 `degree:probability` 文本"""
        return ','.join(f"{d}:{prob!r}" for d, prob in self.entries)

    def __str__(self) -> str:
        terms = ' + '.join(f"{prob:g}x^{d}" for d, prob in self.entries)
        return f"Λ(x)={terms}"


def validate_distribution(raw: Iterable[Tuple[int, float]]) -> DegreeDistribution:
    """
    校验副本数分布

    概率原样保留，不做归一化：和不为1视为配置错误。

    Args:
        raw: (degree, probability) 列表

    Returns:
        DegreeDistribution: 校验后的分布（按度数升序）

    Raises:
        DistributionError: 空列表、重复度数、度数<1、概率<=0、概率和≠1
    """
    pairs = list(raw)
    if not pairs:
        raise DistributionError("副本数分布为空")

    errors = []
    seen = set()
    cleaned = []
    for degree, prob in pairs:
        if isinstance(degree, bool) or int(degree) != degree:
            errors.append(f"度数必须为整数: {degree}")
            continue
        degree = int(degree)
        prob = float(prob)
        if degree < 1:
            errors.append(f"度数必须>=1: {degree}")
        if degree in seen:
            errors.append(f"重复的度数: {degree}")
        if not prob > 0.0 or math.isnan(prob):
            errors.append(f"度数{degree}的概率必须>0: {prob}")
        seen.add(degree)
        cleaned.append((degree, prob))

    if not errors:
        total = math.fsum(prob for _, prob in cleaned)
        if abs(total - 1.0) > PROBABILITY_SUM_TOLERANCE:
            errors.append(f"概率之和必须为1，当前为 {total!r}")

    if errors:
        raise DistributionError("; ".join(errors))

    return DegreeDistribution(entries=tuple(sorted(cleaned)))


@dataclass(frozen=True)
class SimConfig:
    """单次仿真配置 (U, m, G/G*, Λ, 帧数, 种子, 协议)"""
    num_users: int
    frame_slots: int
    target_load: float
    distribution: DegreeDistribution
    total_frames: int = SimulationConfig.DEFAULT_TOTAL_FRAMES
    warmup_frames: Optional[int] = None
    seed: int = SimulationConfig.DEFAULT_SEED
    protocol: Protocol = Protocol.IRSA

    def __post_init__(self):
        if self.warmup_frames is None:
            object.__setattr__(self, 'warmup_frames', default_warmup_frames(
                self.num_users, self.frame_slots, self.target_load, self.total_frames))
        errors = validate_sim_config(self)
        if errors:
            raise ConfigurationError("; ".join(errors))

    @property
    def measured_frames(self) -> int:
        return self.total_frames - self.warmup_frames

    @property
    def target_transmitters(self) -> float:
        """每帧目标发送节点数 m·G"""
        return self.frame_slots * self.target_load

    def with_overrides(self, **changes) -> 'SimConfig':
        """替换字段后重新校验；未显式给出预热帧数时重新计算默认值"""
        if 'warmup_frames' not in changes and any(
                key in changes for key in ('num_users', 'frame_slots', 'target_load', 'total_frames')):
            changes['warmup_frames'] = None
        return replace(self, **changes)

    def __str__(self) -> str:
        return (f"{self.protocol.value}[U={self.num_users}, m={self.frame_slots}, "
                f"G={self.target_load:g}, {self.distribution}, frames={self.total_frames}]")


def default_warmup_frames(num_users: int, frame_slots: int, target_load: float,
                          total_frames: int) -> int:
    """预热帧数默认值：10·ceil(U/(m·G))，且不超过总帧数的一半"""
    target = frame_slots * target_load
    if target <= 0:
        return 0
    warmup = SimulationConfig.WARMUP_CYCLES * math.ceil(num_users / target - SimulationConfig.LOAD_TOLERANCE)
    return int(min(warmup, total_frames // 2))


def validate_sim_config(config: SimConfig) -> List[str]:
    """检查 SimConfig 的全部约束，返回错误消息列表"""
    errors = []
    if not isinstance(config.protocol, Protocol):
        errors.append(f"协议类型错误: {config.protocol!r}")
    if config.num_users < 1:
        errors.append(f"终端数U必须>=1: {config.num_users}")
    if config.frame_slots < 1:
        errors.append(f"帧长m必须>=1: {config.frame_slots}")
    if config.total_frames < 1:
        errors.append(f"总帧数必须>=1: {config.total_frames}")
    if config.warmup_frames < 0:
        errors.append(f"预热帧数不能为负: {config.warmup_frames}")
    elif config.warmup_frames >= config.total_frames:
        errors.append(f"预热帧数({config.warmup_frames})必须小于总帧数({config.total_frames})")
    if not 0 <= config.seed < 2 ** 64:
        errors.append(f"种子必须为64位无符号整数: {config.seed}")

    load = config.target_load
    if math.isnan(load) or load < 0:
        errors.append(f"目标负载必须为非负实数: {load}")
    elif load == 0 and config.protocol is Protocol.AT_IRSA:
        errors.append("AT-IRSA 的目标负载 G* 必须>0")
    elif config.frame_slots * load > config.num_users + SimulationConfig.LOAD_TOLERANCE:
        errors.append(f"m·G = {config.frame_slots * load:g} 超过终端数 U = {config.num_users}")

    if config.distribution.max_degree > config.frame_slots:
        errors.append(f"最大度数L={config.distribution.max_degree} 超过帧长m={config.frame_slots}")
    return errors


@dataclass(frozen=True)
class FrameOccupancy:
    """一帧内用户与时隙的二部图（时隙索引从0开始）"""
    frame_slots: int
    transmissions: Tuple[Tuple[int, FrozenSet[int]], ...]

    def __post_init__(self):
        if self.frame_slots < 1:
            raise ConfigurationError(f"帧长m必须>=1: {self.frame_slots}")
        users = set()
        for user_id, slots in self.transmissions:
            if user_id in users:
                raise ConfigurationError(f"用户{user_id}在同一帧中出现多次")
            users.add(user_id)
            if not slots:
                raise ConfigurationError(f"用户{user_id}的副本集合为空")
            if min(slots) < 0 or max(slots) >= self.frame_slots:
                raise ConfigurationError(f"用户{user_id}的时隙索引越界: {sorted(slots)}")

    @classmethod
    def from_mapping(cls, frame_slots: int, mapping: Mapping[int, Iterable[int]]) -> 'FrameOccupancy':
        """由 {user_id: slots} 构造（0起始索引）"""
        return cls(frame_slots, tuple((user, frozenset(slots)) for user, slots in mapping.items()))

    @classmethod
    def from_one_based(cls, frame_slots: int, mapping: Mapping[int, Iterable[int]]) -> 'FrameOccupancy':
        """由1起始的时隙编号构造（与示意图编号一致）"""
        return cls.from_mapping(frame_slots, {user: [s - 1 for s in slots] for user, slots in mapping.items()})

    @property
    def num_transmissions(self) -> int:
        return len(self.transmissions)

    @property
    def instantaneous_load(self) -> float:
        """G_ℓ = U_ℓ / m"""
        return self.num_transmissions / self.frame_slots

    def user_ids(self) -> List[int]:
        return [user for user, _ in self.transmissions]

    def slot_occupants(self) -> List[set]:
        occupants = [set() for _ in range(self.frame_slots)]
        for user, slots in self.transmissions:
            for slot in slots:
                occupants[slot].add(user)
        return occupants


@dataclass
class NodeState:
    """终端在接收端的瞬时AoI（时隙为单位，在帧边界采样）"""
    user_id: int
    aoi_slots: int

    def last_update_time(self, now_slots: int) -> int:
        """σ_u = t − δ_u"""
        return now_slots - self.aoi_slots


@dataclass(frozen=True)
class ThresholdFeedback:
    """AT-IRSA 帧边界广播的 (Θ, p)"""
    threshold_slots: int
    barring_probability: float
    eligible_count: int

    def __str__(self) -> str:
        return f"Θ={self.threshold_slots}, p={self.barring_probability:.4f}, n(Θ)={self.eligible_count}"


@dataclass(frozen=True)
class SlotCensus:
    """空闲/单包/碰撞时隙计数"""
    idle: int
    singleton: int
    collided: int

    @property
    def total(self) -> int:
        return self.idle + self.singleton + self.collided


@dataclass(frozen=True)
class DecodeOutcome:
    """SIC 剥离译码结果"""
    decoded_users: FrozenSet[int]
    decode_order: Tuple[Tuple[int, int], ...]
    residual_collided_slots: int
    residual_census: Optional[SlotCensus] = None
    rounds: int = 0

    @property
    def num_decoded(self) -> int:
        return len(self.decoded_users)


@dataclass
class RunMetrics:
    """一次仿真运行的统计结果"""
    protocol: Protocol
    num_users: int
    frame_slots: int
    throughput: float
    avg_network_aoi: float
    normalized_aoi: float
    realized_load: float
    per_frame_success_prob: float
    measured_frames: int
    # 诊断计数
    transmitted_total: int = 0
    decoded_total: int = 0
    window_slots: int = 0
    updated_nodes: int = 0

    def get_summary(self) -> str:
        """获取摘要"""
        return (f"{self.protocol.value}: S={self.throughput:.4f}, Δ={self.avg_network_aoi:.2f}, "
                f"Δ/U={self.normalized_aoi:.4f}, G={self.realized_load:.4f}, "
                f"p_s={self.per_frame_success_prob:.4f}, frames={self.measured_frames}")


@dataclass(frozen=True)
class AnalyticInput:
    """AT-IRSA 近似模型输入 (m, U, G*, p_s)"""
    frame_slots: int
    num_users: int
    target_load: float
    success_prob: float

    @property
    def round_robin_frames(self) -> float:
        """A = U / (m·G*)"""
        return self.num_users / (self.frame_slots * self.target_load)

    @property
    def peak_throughput(self) -> float:
        """S* = G*·p_s"""
        return self.target_load * self.success_prob


@dataclass
class ExperimentSpec:
    """实验描述：基准配置 + 扫描轴 + 重复次数"""
    base: SimConfig
    sweep_axes: Dict[str, List[Any]] = field(default_factory=dict)
    replications: int = 1
    output_path: Optional[Path] = None
    analytic: bool = False
    include_timing: bool = False
    # 显式指定的预热帧数；None 表示每个扫描点按默认规则重新计算
    fixed_warmup: Optional[int] = None

    def sweep_points(self) -> List[Dict[str, Any]]:
        """扫描轴的笛卡尔积（按轴的声明顺序，最后一个轴变化最快）"""
        points: List[Dict[str, Any]] = [{}]
        for axis, values in self.sweep_axes.items():
            points = [dict(point, **{axis: value}) for point in points for value in values]
        return points

    def point_config(self, point: Mapping[str, Any]) -> SimConfig:
        """代入一个扫描点得到的仿真配置"""
        return self.base.with_overrides(warmup_frames=self.fixed_warmup, **point)


@dataclass
class ResultRecord:
    """一次重复实验的结果行"""
    protocol: str
    U: int
    m: int
    target_load: float
    seed: int
    measured_frames: int
    throughput: float
    avg_network_aoi: float
    normalized_aoi: float
    realized_load: float
    ps_estimate: float
    analytic_aoi: Optional[float] = None
    wall_time_seconds: float = 0.0
    point_index: int = 0
    replication: int = 0


# 工厂函数
def create_sim_config_from_dict(data: Mapping[str, Any]) -> SimConfig:
    """
    从扁平字典创建仿真配置

    Args:
        data: 键与 SimConfig 字段同名；distribution 可为文本 `3:1.0` 或 (degree, prob) 列表

    Returns:
        SimConfig: 校验后的配置
    """
    from irsa_aoi_sim.utils.config_parser import parse_distribution

    missing = [key for key in ('num_users', 'frame_slots', 'target_load') if data.get(key) is None]
    if missing:
        raise ConfigurationError(f"缺少必需字段: {', '.join(missing)}")

    raw_dist = data.get('distribution', '3:1.0')
    if isinstance(raw_dist, DegreeDistribution):
        distribution = raw_dist
    elif isinstance(raw_dist, str):
        distribution = parse_distribution(raw_dist)
    else:
        distribution = validate_distribution(raw_dist)

    protocol = data.get('protocol', Protocol.IRSA)
    if not isinstance(protocol, Protocol):
        protocol = Protocol.parse(protocol)

    warmup = data.get('warmup_frames')
    return SimConfig(
        num_users=int(data['num_users']),
        frame_slots=int(data['frame_slots']),
        target_load=float(data['target_load']),
        distribution=distribution,
        total_frames=int(data.get('total_frames') or SimulationConfig.DEFAULT_TOTAL_FRAMES),
        warmup_frames=None if warmup is None else int(warmup),
        seed=int(data.get('seed', SimulationConfig.DEFAULT_SEED)),
        protocol=protocol,
    )
