"""
图表数据模块
只输出CSV（不绘图）：吞吐量-负载曲线、归一化AoI-终端数曲线、解析与仿真对比
"""
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from irsa_aoi_sim.analysis.aoi_models import at_irsa_aoi_approx, normalized_aoi_curve, sa_throughput
from irsa_aoi_sim.analysis.statistical_analysis import StatisticalAnalyzer
from irsa_aoi_sim.analysis.throughput_estimator import PsEstimate, estimate_ps_parallel
from irsa_aoi_sim.config.logging_config import logger
from irsa_aoi_sim.config.settings import AnalyticConfig, SimulationConfig
from irsa_aoi_sim.models.access_data import (
    AnalyticInput,
    DegreeDistribution,
    ExperimentSpec,
    Protocol,
    ResultRecord,
    SimConfig,
)
from irsa_aoi_sim.models.errors import ConfigurationError, MissingResultsError
from irsa_aoi_sim.utils.data_exporter import DataExporter
from irsa_aoi_sim.utils.random_streams import StreamPurpose


class FigureKind(Enum):
    THROUGHPUT_VS_LOAD = 'throughput_vs_load'
    AOI_VS_USERS = 'aoi_vs_users'
    ANALYTIC_VS_SIM = 'analytic_vs_sim'

    @classmethod
    def parse(cls, text: str) -> 'FigureKind':
        try:
            return cls(text.strip().lower().replace('-', '_'))
        except ValueError:
            choices = ', '.join(kind.value for kind in cls)
            raise ConfigurationError(f"未知图表类型 '{text}'，可选: {choices}") from None


THROUGHPUT_LOADS = tuple(round(0.1 + 0.04 * i, 2) for i in range(21))
FIGURE_USERS = (1000, 2000, 4000, 8000)
FIGURE_FRAME_SLOTS = (100, 400)
# 仅解析值的外推终端数
EXTENDED_USERS = (16000, 32000, 50000)
SINGLE_REPLICA = DegreeDistribution(((1, 1.0),))

THROUGHPUT_COLUMNS = ['m', 'target_load', 'replications', 'realized_load_mean',
                      'irsa_throughput_mean', 'irsa_throughput_std', 'sa_throughput']
AOI_COLUMNS = ['protocol', 'm', 'U', 'target_load', 'replications',
               'normalized_aoi_mean', 'normalized_aoi_std', 'normalized_aoi_ci95']
ANALYTIC_COLUMNS = ['m', 'U', 'target_load', 'replications', 'ps_estimate', 'ps_std_error',
                    'simulated_aoi', 'analytic_aoi', 'relative_error',
                    'simulated_normalized_aoi', 'analytic_normalized_aoi']


def figure_experiments(figure: FigureKind, dist: DegreeDistribution,
                       total_frames: int = SimulationConfig.DEFAULT_TOTAL_FRAMES,
                       replications: int = 1,
                       seed: int = SimulationConfig.DEFAULT_SEED) -> List[ExperimentSpec]:
    """
    生成某张图所需的实验列表

    throughput_vs_load: IRSA, U=4000, m=100, G ∈ 0.1..0.9 步长 0.04
    aoi_vs_users: SA / IRSA / AT-IRSA, m ∈ {100, 400}, U ∈ {1000..8000}, 负载取已知峰值
    analytic_vs_sim: AT-IRSA, 同上网格
    """
    def _base(protocol: Protocol, users: int, m: int, load: float) -> SimConfig:
        if protocol is Protocol.SLOTTED_ALOHA:
            # 单时隙帧：时隙总数与 m=100 的 IRSA 运行相同
            return SimConfig(num_users=users, frame_slots=1, target_load=load,
                             distribution=SINGLE_REPLICA, total_frames=total_frames * FIGURE_FRAME_SLOTS[0],
                             seed=seed, protocol=protocol)
        return SimConfig(num_users=users, frame_slots=m, target_load=load, distribution=dist,
                         total_frames=total_frames, seed=seed, protocol=protocol)

    if figure is FigureKind.THROUGHPUT_VS_LOAD:
        return [ExperimentSpec(base=_base(Protocol.IRSA, 4000, 100, THROUGHPUT_LOADS[0]),
                               sweep_axes={'target_load': list(THROUGHPUT_LOADS)},
                               replications=replications)]

    protocols = (Protocol.SLOTTED_ALOHA, Protocol.IRSA, Protocol.AT_IRSA)
    if figure is FigureKind.ANALYTIC_VS_SIM:
        protocols = (Protocol.AT_IRSA,)

    specs = []
    for protocol in protocols:
        # 时隙ALOHA按单时隙帧运行，接入概率 1/U 对应 G = 1
        frame_sizes = (1,) if protocol is Protocol.SLOTTED_ALOHA else FIGURE_FRAME_SLOTS
        for m in frame_sizes:
            load = 1.0 if protocol is Protocol.SLOTTED_ALOHA else AnalyticConfig.KNOWN_PEAK_LOADS[m]
            specs.append(ExperimentSpec(base=_base(protocol, FIGURE_USERS[0], m, load),
                                        sweep_axes={'num_users': list(FIGURE_USERS)},
                                        replications=replications))
    return specs


def _grouped(records: Sequence[ResultRecord], keys: Sequence[str],
             metrics: Sequence[str]) -> List[Dict[str, float]]:
    rows = [{name: getattr(r, name) for name in list(keys) + list(metrics)} for r in records]
    return StatisticalAnalyzer().group_summary(rows, keys, metrics)


def _require(records: Sequence[ResultRecord], protocols: Sequence[str], figure: FigureKind) -> List[ResultRecord]:
    selected = [r for r in records if r.protocol in protocols]
    if not selected:
        raise MissingResultsError(f"{figure.value}: 缺少 {'/'.join(protocols)} 的仿真结果")
    return selected


def throughput_rows(records: Sequence[ResultRecord]) -> List[List]:
    """IRSA 吞吐量曲线，附时隙ALOHA参考 G·e^(−G)"""
    selected = _require(records, [Protocol.IRSA.value], FigureKind.THROUGHPUT_VS_LOAD)
    rows = []
    for entry in _grouped(selected, ('m', 'target_load'), ('throughput', 'realized_load')):
        rows.append([entry['m'], entry['target_load'], entry['replications'],
                     entry['realized_load_mean'], entry['throughput_mean'],
                     entry['throughput_std'], sa_throughput(entry['target_load'])])
    rows.sort(key=lambda row: (row[0], row[1]))
    return rows


def aoi_rows(records: Sequence[ResultRecord]) -> List[List]:
    selected = _require(records, [p.value for p in Protocol], FigureKind.AOI_VS_USERS)
    rows = []
    for entry in _grouped(selected, ('protocol', 'm', 'U', 'target_load'), ('normalized_aoi',)):
        rows.append([entry['protocol'], entry['m'], entry['U'], entry['target_load'],
                     entry['replications'], entry['normalized_aoi_mean'],
                     entry['normalized_aoi_std'], entry['normalized_aoi_ci95']])
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    return rows


def analytic_rows(records: Sequence[ResultRecord], dist: DegreeDistribution,
                  ps_trials: int = AnalyticConfig.DEFAULT_PS_TRIALS,
                  seed: int = SimulationConfig.DEFAULT_SEED, workers: int = 1,
                  extended_users: Sequence[int] = EXTENDED_USERS) -> List[List]:
    """
    AT-IRSA 解析值与仿真值逐点配对

    p_s 由 estimate_ps 在 (m, G*) 上重新估计，同一 (m, G*) 只估计一次。
    每个 (m, G*) 另外附带 extended_users 上的纯解析行（仿真列留空），
    用于观察大规模网络下 Δ/U 的趋势。
    """
    selected = _require(records, [Protocol.AT_IRSA.value], FigureKind.ANALYTIC_VS_SIM)
    analyzer = StatisticalAnalyzer()
    ps_cache: Dict[Tuple[int, float], PsEstimate] = {}
    simulated_users: Dict[Tuple[int, float], set] = {}
    rows = []
    for entry in _grouped(selected, ('m', 'U', 'target_load'), ('avg_network_aoi',)):
        m, users, load = entry['m'], entry['U'], entry['target_load']
        if (m, load) not in ps_cache:
            ps_cache[(m, load)] = estimate_ps_parallel(m, dist, load, ps_trials, seed, workers,
                                                       stream_keys=(StreamPurpose.PS_ESTIMATE, m))
        simulated_users.setdefault((m, load), set()).add(users)
        ps = ps_cache[(m, load)]
        simulated = entry['avg_network_aoi_mean']
        analytic = at_irsa_aoi_approx(AnalyticInput(m, users, load, ps.value))
        rows.append([m, users, load, entry['replications'], ps.value, ps.std_error,
                     simulated, analytic, analyzer.relative_error(analytic, simulated),
                     simulated / users, analytic / users])

    for (m, load), ps in ps_cache.items():
        if ps.value <= 0.0:
            logger.warning(f"m={m}, G*={load:g}: p_s=0，跳过解析外推")
            continue
        extra = [u for u in extended_users if u not in simulated_users[(m, load)] and m * load <= u]
        for users, normalized in normalized_aoi_curve(m, load, ps.value, extra):
            rows.append([m, users, load, 0, ps.value, ps.std_error,
                         None, normalized * users, None, None, normalized])
    rows.sort(key=lambda row: (row[0], row[1]))
    return rows


def emit_fig_data(figure: FigureKind, records: Sequence[ResultRecord], output_path: Path,
                  dist: Optional[DegreeDistribution] = None,
                  ps_trials: int = AnalyticConfig.DEFAULT_PS_TRIALS,
                  seed: int = SimulationConfig.DEFAULT_SEED, workers: int = 1) -> Path:
    """
    把已有实验结果整理为图表CSV

    Args:
        figure: 图表类型
        records: run_experiment 的结果（或从结果CSV读回）
        output_path: 输出CSV路径
        dist: analytic_vs_sim 估计 p_s 所用的副本数分布

    Raises:
        MissingResultsError: 缺少所需协议的结果
    """
    if not records:
        raise MissingResultsError(f"{figure.value}: 没有可用的实验结果")

    if figure is FigureKind.THROUGHPUT_VS_LOAD:
        headers, rows = THROUGHPUT_COLUMNS, throughput_rows(records)
    elif figure is FigureKind.AOI_VS_USERS:
        headers, rows = AOI_COLUMNS, aoi_rows(records)
    else:
        if dist is None:
            raise ConfigurationError("analytic_vs_sim 需要副本数分布以估计 p_s")
        headers, rows = ANALYTIC_COLUMNS, analytic_rows(records, dist, ps_trials, seed, workers)

    logger.info(f"{figure.value}: {len(rows)} 个数据点")
    return DataExporter.export_to_csv(headers, rows, output_path)
