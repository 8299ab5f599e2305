"""
实验编排模块
扫描轴笛卡尔积 × 重复次数，每个任务使用由 (主种子, 扫描点序号, 重复序号) 派生的种子
"""
import time
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Tuple

from irsa_aoi_sim.analysis.aoi_models import at_irsa_aoi_approx, irsa_aoi, sa_aoi
from irsa_aoi_sim.analysis.statistical_analysis import StatisticalAnalyzer
from irsa_aoi_sim.config.logging_config import logger
from irsa_aoi_sim.models.access_data import (
    AnalyticInput,
    ExperimentSpec,
    Protocol,
    ResultRecord,
    RunMetrics,
    SimConfig,
)
from irsa_aoi_sim.models.errors import ConfigurationError
from irsa_aoi_sim.simulation.protocols import run_protocol
from irsa_aoi_sim.threads.worker_threads import ProgressCallback, ReplicationWorkerPool
from irsa_aoi_sim.utils.data_exporter import DataExporter, RecordCsvWriter, summary_path_for
from irsa_aoi_sim.utils.random_streams import StreamPurpose, derive_seed

SUMMARY_KEYS = ('protocol', 'U', 'm', 'target_load')
SUMMARY_METRICS = ('throughput', 'avg_network_aoi', 'normalized_aoi', 'realized_load', 'ps_estimate')


def analytic_aoi_for(config: SimConfig, metrics: RunMetrics) -> Optional[float]:
    """用本次运行的 S / p_s 计算对应的解析AoI；无法计算时返回 None"""
    try:
        if config.protocol is Protocol.AT_IRSA:
            ps = metrics.per_frame_success_prob
            if ps <= 0:
                return None
            return at_irsa_aoi_approx(AnalyticInput(config.frame_slots, config.num_users,
                                                    config.target_load, ps))
        if metrics.throughput <= 0:
            return None
        if config.protocol is Protocol.IRSA:
            return irsa_aoi(config.frame_slots, config.num_users, metrics.throughput)
        return sa_aoi(config.num_users, metrics.throughput)
    except ValueError as e:
        logger.warning(f"解析AoI不可用 ({config}): {e}")
        return None


def make_record(config: SimConfig, metrics: RunMetrics, wall_time: float, analytic: bool,
                point_index: int = 0, replication: int = 0) -> ResultRecord:
    """由运行结果构造结果行；AT-IRSA 总是附带解析值，其余协议按需"""
    want_analytic = analytic or config.protocol is Protocol.AT_IRSA
    return ResultRecord(
        protocol=config.protocol.value,
        U=config.num_users,
        m=config.frame_slots,
        target_load=config.target_load,
        seed=config.seed,
        measured_frames=metrics.measured_frames,
        throughput=metrics.throughput,
        avg_network_aoi=metrics.avg_network_aoi,
        normalized_aoi=metrics.avg_network_aoi / config.num_users,
        realized_load=metrics.realized_load,
        ps_estimate=metrics.per_frame_success_prob,
        analytic_aoi=analytic_aoi_for(config, metrics) if want_analytic else None,
        wall_time_seconds=wall_time,
        point_index=point_index,
        replication=replication,
    )


def _run_replication(task: Tuple[SimConfig, bool, int, int]) -> ResultRecord:
    config, analytic, point_index, replication = task
    started = time.perf_counter()
    metrics = run_protocol(config)
    return make_record(config, metrics, time.perf_counter() - started, analytic, point_index, replication)


def replication_config(spec: ExperimentSpec, point_index: int, point, replication: int) -> SimConfig:
    """扫描点 + 重复序号对应的配置（种子只依赖主种子与两个序号）"""
    seed = derive_seed(spec.base.seed, StreamPurpose.REPLICATION_SEED, point_index, replication)
    return spec.point_config(point).with_overrides(seed=seed)


def build_tasks(spec: ExperimentSpec) -> List[Tuple[SimConfig, bool, int, int]]:
    if spec.replications < 1:
        raise ConfigurationError(f"重复次数必须>=1: {spec.replications}")
    tasks = []
    for point_index, point in enumerate(spec.sweep_points()):
        for replication in range(spec.replications):
            tasks.append((replication_config(spec, point_index, point, replication),
                          spec.analytic, point_index, replication))
    return tasks


def run_experiment(spec: ExperimentSpec, workers: int = 1,
                   progress: Optional[ProgressCallback] = None) -> List[ResultRecord]:
    """
    执行实验

    结果按 (扫描点, 重复序号) 顺序增量写入 spec.output_path，并生成汇总CSV；
    相同实验配置重跑得到逐字节相同的文件（默认不写墙钟时间列）。

    Raises:
        ConfigurationError: 代入后的配置不合法
        OSError: 输出路径不可写
    """
    tasks = build_tasks(spec)
    logger.info(f"实验开始: {len(spec.sweep_points())} 个扫描点 × {spec.replications} 次重复, "
                f"{spec.base.protocol.value}, workers={workers}")
    pool = ReplicationWorkerPool(workers, progress)

    records: List[ResultRecord] = []
    if spec.output_path is not None:
        with RecordCsvWriter(spec.output_path, spec.include_timing) as writer:
            for record in pool.imap(_run_replication, tasks):
                writer.write(record)
                records.append(record)
        write_summary(records, summary_path_for(spec.output_path))
    else:
        records = pool.map(_run_replication, tasks)

    logger.info(f"实验完成: {len(records)} 条结果")
    return records


def summarize_records(records: Iterable[ResultRecord]) -> List[dict]:
    """每个扫描点的均值/样本标准差/95%置信半宽"""
    rows = [{key: getattr(r, key) for key in SUMMARY_KEYS + SUMMARY_METRICS} for r in records]
    return StatisticalAnalyzer().group_summary(rows, SUMMARY_KEYS, SUMMARY_METRICS)


def write_summary(records: List[ResultRecord], output_path: Path) -> Path:
    summary = summarize_records(records)
    headers = list(SUMMARY_KEYS) + ['replications'] + [
        f'{metric}_{stat}' for metric in SUMMARY_METRICS for stat in ('mean', 'std', 'ci95')]
    rows = [[entry.get(h) for h in headers] for entry in summary]
    return DataExporter.export_to_csv(headers, rows, output_path)


def sort_records(records: Iterable[ResultRecord]) -> List[ResultRecord]:
    """与调度顺序无关的规范排序"""
    return sorted(records, key=lambda r: (r.protocol, r.m, r.U, r.target_load, r.point_index,
                                          r.replication, r.seed))
