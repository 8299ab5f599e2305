"""
AoI 解析模型

- IRSA（独立同分布激活）:   Δ = m/2 + U/S
- 时隙ALOHA（接入概率1/U）: Δ = 1/2 + U/S
- AT-IRSA 近似: Y ≈ m(A + B)，A = U/(m·G*)，B ~ 几何分布(支撑 {0,1,...}, 成功概率 p_s)，
  Δ = m + E[Y²]/(2E[Y])
所有结果以时隙为单位。
"""
import math
from typing import Iterable, List, Tuple

from irsa_aoi_sim.config.settings import AnalyticConfig
from irsa_aoi_sim.models.access_data import AnalyticInput


def irsa_aoi(m: float, U: float, S: float) -> float:
    """
    IRSA 平均网络AoI: m/2 + U/S

    Raises:
        ValueError: S <= 0
    """
    if not S > 0:
        raise ValueError(f"吞吐量S必须>0: {S}")
    return m / 2.0 + U / S


def sa_aoi(U: float, S: float) -> float:
    """
    时隙ALOHA 平均网络AoI: 1/2 + U/S

    Raises:
        ValueError: S <= 0
    """
    if not S > 0:
        raise ValueError(f"吞吐量S必须>0: {S}")
    return 0.5 + U / S


def sa_throughput(load: float) -> float:
    """时隙ALOHA 在泊松近似下的吞吐量 S = G·e^(−G)"""
    return load * math.exp(-load)


def sa_throughput_finite(U: int) -> float:
    """U 个终端、接入概率 1/U 时的单包概率 U·(1/U)·(1−1/U)^(U−1)"""
    if U < 1:
        raise ValueError(f"终端数U必须>=1: {U}")
    return (1.0 - 1.0 / U) ** (U - 1)


def inter_update_moments(A: float, p_s: float) -> Tuple[float, float]:
    """
    归一化更新间隔矩 (E[Y]/m, E[Y²]/m²)

    q = 1 − p_s，E[B] = q/p_s，E[B²] = q(2 − p_s)/p_s²

    Raises:
        ValueError: p_s 不在 (0, 1] 内
    """
    if not 0.0 < p_s <= 1.0:
        raise ValueError(f"成功概率p_s必须在(0, 1]内: {p_s}")
    if A < 0:
        raise ValueError(f"A必须>=0: {A}")
    q = 1.0 - p_s
    mean_b = q / p_s
    second_b = q * (2.0 - p_s) / (p_s * p_s)
    return A + mean_b, A * A + 2.0 * A * mean_b + second_b


def _check_input(data: AnalyticInput) -> None:
    if not 0.0 < data.success_prob <= 1.0:
        raise ValueError(f"成功概率p_s必须在(0, 1]内: {data.success_prob}")
    if data.frame_slots < 1 or data.num_users < 1 or not data.target_load > 0:
        raise ValueError(f"解析输入不合法: {data}")
    if data.round_robin_frames < 1.0 - 1e-12:
        raise ValueError(f"A = U/(m·G*) 必须>=1，当前为 {data.round_robin_frames:g}")


def at_irsa_aoi_closed_form(data: AnalyticInput) -> float:
    """AT-IRSA 近似的闭式表达"""
    _check_input(data)
    m = data.frame_slots
    U = data.num_users
    G = data.target_load
    p = data.success_prob
    S = data.peak_throughput
    return (m / 2.0
            + (m * G + p * U) / (2.0 * S)
            + (m * m / 2.0) * (G - S) / (m * (1.0 - p) * S + p * p * U))


def at_irsa_aoi_moment_form(data: AnalyticInput) -> float:
    """AT-IRSA 近似的矩形式: m + E[Y²]/(2E[Y])"""
    _check_input(data)
    mean_y, second_y = inter_update_moments(data.round_robin_frames, data.success_prob)
    return data.frame_slots + data.frame_slots * second_y / (2.0 * mean_y)


def at_irsa_aoi_approx(data: AnalyticInput) -> float:
    """
    AT-IRSA 平均网络AoI 近似值（时隙）

    两种等价形式同时计算并交叉校验。

    Raises:
        ValueError: p_s 不在 (0, 1] 内或输入不合法
    """
    closed = at_irsa_aoi_closed_form(data)
    moment = at_irsa_aoi_moment_form(data)
    if not math.isclose(closed, moment, rel_tol=AnalyticConfig.IDENTITY_RTOL):
        raise ArithmeticError(f"闭式与矩形式不一致: {closed!r} vs {moment!r}")
    return closed


def normalized_aoi_curve(m: int, target_load: float, p_s: float,
                         users: Iterable[int]) -> List[Tuple[int, float]]:
    """对一组终端数计算 Δ/U（用于外推大规模网络）"""
    return [(U, at_irsa_aoi_approx(AnalyticInput(m, U, target_load, p_s)) / U) for U in users]


def feedback_bits(m: int) -> int:
    """每帧反馈开销：每个时隙一位（完全解出/残余碰撞）"""
    return int(m)
