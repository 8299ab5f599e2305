#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
IRSA 信息年龄仿真分析软件 - 命令行入口

使用方法:
    irsa-aoi simulate --protocol at-irsa --users 4000 --frame-slots 400 --load 0.73
    irsa-aoi sweep experiment.toml --workers 4
    irsa-aoi analytic --protocol at-irsa --users 4000 --frame-slots 400 --load 0.73 --ps 0.98
    irsa-aoi peak --frame-slots 800
    irsa-aoi figdata --figure aoi_vs_users --out fig_aoi.csv
    irsa-aoi table1
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from irsa_aoi_sim import __version__
from irsa_aoi_sim.analysis.aoi_models import (
    at_irsa_aoi_approx,
    feedback_bits,
    inter_update_moments,
    irsa_aoi,
    sa_aoi,
    sa_throughput_finite,
)
from irsa_aoi_sim.analysis.throughput_estimator import estimate_ps_parallel, find_peak_load
from irsa_aoi_sim.config import AnalyticConfig, CliConfig, SimulationConfig, Table1Config, logger, setup_logging
from irsa_aoi_sim.harness.experiment_runner import run_experiment
from irsa_aoi_sim.models.access_data import AnalyticInput, ExperimentSpec, Protocol, create_sim_config_from_dict
from irsa_aoi_sim.models.errors import ConfigurationError
from irsa_aoi_sim.reports.figure_data import FigureKind, emit_fig_data, figure_experiments
from irsa_aoi_sim.reports.table_report import compute_at_irsa_normalized, report_table1
from irsa_aoi_sim.simulation.protocols import run_protocol
from irsa_aoi_sim.threads.worker_threads import TqdmProgress
from irsa_aoi_sim.utils.config_parser import load_experiment_spec, parse_distribution
from irsa_aoi_sim.utils.data_exporter import DataExporter, read_records_csv
from irsa_aoi_sim.utils.random_streams import StreamPurpose


def parse_grid(text: str) -> List[float]:
    """负载网格：`start:stop:step`（含端点）或逗号分隔列表"""
    if ':' in text:
        try:
            start, stop, step = (float(part) for part in text.split(':'))
        except ValueError:
            raise ConfigurationError(f"无法解析负载网格: {text}") from None
        if step <= 0 or stop < start:
            raise ConfigurationError(f"负载网格不合法: {text}")
        count = int(round((stop - start) / step)) + 1
        return [round(start + step * i, 10) for i in range(count)]
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigurationError(f"无法解析负载网格: {text}") from None


def _common_parser() -> argparse.ArgumentParser:
    """各子命令共享的参数（缺省为 None，表示沿用配置文件或默认值）"""
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group('通用参数')
    group.add_argument('--protocol', help='sa | irsa | at-irsa')
    group.add_argument('--users', type=int, dest='num_users', help='终端数 U')
    group.add_argument('--frame-slots', type=int, dest='frame_slots', help='帧长 m（时隙数）')
    group.add_argument('--load', type=float, dest='target_load', help='目标负载 G（AT-IRSA 为 G*）')
    group.add_argument('--lambda', dest='distribution', help="副本数分布，如 '3:1.0' 或 '2:0.5,3:0.5'")
    group.add_argument('--frames', type=int, dest='total_frames', help='总帧数（含预热）')
    group.add_argument('--warmup', type=int, dest='warmup_frames', help='预热帧数')
    group.add_argument('--seed', type=int, help='主随机种子')
    group.add_argument('--replications', type=int, help='重复次数')
    group.add_argument('--out', type=Path, dest='output_path', help='输出CSV路径')
    group.add_argument('--trace', type=Path, help='逐帧跟踪输出文件')
    group.add_argument('--workers', type=int, default=CliConfig.DEFAULT_WORKERS, help='并行进程数')
    group.add_argument('--log-file', help='日志文件路径')
    group.add_argument('--verbose', action='store_true', help='控制台输出调试日志')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog=CliConfig.PROG_NAME,
                                     description='帧结构随机接入协议的信息年龄仿真与解析计算')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('simulate', parents=[common], help='运行单个协议配置')

    sweep = sub.add_parser('sweep', parents=[common], help='按实验文件执行参数扫描')
    sweep.add_argument('experiment', help='TOML 实验文件')
    sweep.add_argument('--analytic', action='store_true', default=None, help='为 SA/IRSA 结果附带解析AoI')
    sweep.add_argument('--timing', action='store_true', dest='include_timing', default=None,
                       help='结果中包含墙钟时间列')

    analytic = sub.add_parser('analytic', parents=[common], help='计算解析AoI')
    analytic.add_argument('--ps', type=float, help='每帧成功概率 p_s（AT-IRSA；缺省时估计）')
    analytic.add_argument('--throughput', type=float, help='吞吐量 S（IRSA/SA；缺省时估计）')
    analytic.add_argument('--ps-trials', type=int, default=AnalyticConfig.DEFAULT_PS_TRIALS)

    peak = sub.add_parser('peak', parents=[common], help='搜索吞吐量峰值负载 G*')
    peak.add_argument('--grid', default=None, help="负载网格，如 '0.5:0.9:0.02'")
    peak.add_argument('--ps-trials', type=int, default=AnalyticConfig.DEFAULT_PS_TRIALS)
    peak.add_argument('--binomial', action='store_true', help='每次试验的发送数按二项分布抽取')

    figdata = sub.add_parser('figdata', parents=[common], help='输出图表数据CSV')
    figdata.add_argument('--figure', required=True, choices=[kind.value for kind in FigureKind])
    figdata.add_argument('--results', type=Path, help='已有的结果CSV（缺省时重新运行实验）')
    figdata.add_argument('--ps-trials', type=int, default=AnalyticConfig.DEFAULT_PS_TRIALS)

    table1 = sub.add_parser('table1', parents=[common], help='大规模网络归一化AoI对比表')
    table1.add_argument('--value', type=float, help='已知的 AT-IRSA Δ/U（缺省时计算）')
    table1.add_argument('--grid', default=None, help="峰值搜索负载网格")
    table1.add_argument('--ps-trials', type=int, default=AnalyticConfig.DEFAULT_PS_TRIALS)
    return parser


def _sim_overrides(args: argparse.Namespace) -> dict:
    keys = ('protocol', 'num_users', 'frame_slots', 'target_load', 'distribution', 'total_frames',
            'warmup_frames', 'seed', 'replications', 'output_path')
    return {key: getattr(args, key, None) for key in keys}


def _distribution(args: argparse.Namespace):
    return parse_distribution(args.distribution or CliConfig.DEFAULT_LAMBDA)


def _seed(args: argparse.Namespace) -> int:
    return SimulationConfig.DEFAULT_SEED if args.seed is None else args.seed


def _run_with_progress(spec: ExperimentSpec, workers: int, desc: str):
    progress = TqdmProgress(desc)
    try:
        return run_experiment(spec, workers, progress)
    finally:
        progress.close()


def cmd_simulate(args: argparse.Namespace) -> int:
    overrides = {k: v for k, v in _sim_overrides(args).items() if v is not None}
    overrides.setdefault('protocol', Protocol.IRSA.value)
    config = create_sim_config_from_dict(overrides)

    if args.trace is not None:
        with open(args.trace, 'w', encoding='utf-8', newline='') as trace:
            metrics = run_protocol(config, trace)
        print(metrics.get_summary())
        return 0

    spec = ExperimentSpec(base=config, replications=args.replications or 1,
                          output_path=args.output_path, fixed_warmup=args.warmup_frames)
    for record in _run_with_progress(spec, args.workers, config.protocol.value):
        print(f"{record.protocol}: seed={record.seed} S={record.throughput:.4f} "
              f"Δ={record.avg_network_aoi:.2f} Δ/U={record.normalized_aoi:.4f} p_s={record.ps_estimate:.4f}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    overrides = _sim_overrides(args)
    overrides['analytic'] = args.analytic
    overrides['include_timing'] = args.include_timing
    spec = load_experiment_spec(args.experiment, overrides)
    records = _run_with_progress(spec, args.workers, 'sweep')
    print(f"完成 {len(records)} 次运行" + (f"，结果: {spec.output_path}" if spec.output_path else ''))
    return 0


def cmd_analytic(args: argparse.Namespace) -> int:
    protocol = Protocol.parse(args.protocol or Protocol.AT_IRSA.value)
    if args.num_users is None:
        raise ConfigurationError("analytic 需要 --users")
    U = args.num_users

    if protocol is Protocol.SLOTTED_ALOHA:
        S = args.throughput if args.throughput is not None else sa_throughput_finite(U)
        delta = sa_aoi(U, S)
        print(f"SA: U={U}, S={S:.6f}, Δ={delta:.4f}, Δ/U={delta / U:.6f}")
        return 0

    if args.frame_slots is None or args.target_load is None:
        raise ConfigurationError("analytic 需要 --frame-slots 与 --load")
    m, load = args.frame_slots, args.target_load

    ps = args.ps
    if ps is None and not (protocol is Protocol.IRSA and args.throughput is not None):
        ps = estimate_ps_parallel(m, _distribution(args), load, args.ps_trials, _seed(args),
                                  args.workers, stream_keys=(StreamPurpose.PS_ESTIMATE, m)).value

    if protocol is Protocol.IRSA:
        S = args.throughput if args.throughput is not None else load * ps
        delta = irsa_aoi(m, U, S)
        print(f"IRSA: U={U}, m={m}, G={load:g}, S={S:.6f}, Δ={delta:.4f}, Δ/U={delta / U:.6f}")
        return 0

    data = AnalyticInput(m, U, load, ps)
    mean_y, second_y = inter_update_moments(data.round_robin_frames, ps)
    delta = at_irsa_aoi_approx(data)
    print(f"AT-IRSA: U={U}, m={m}, G*={load:g}, p_s={ps:.6f}, S*={data.peak_throughput:.6f}")
    print(f"  A={data.round_robin_frames:.4f}, E[Y]/m={mean_y:.4f}, E[Y²]/m²={second_y:.4f}")
    print(f"  Δ={delta:.4f}, Δ/U={delta / U:.6f}, 反馈开销={feedback_bits(m)} bit/帧")
    return 0


def cmd_peak(args: argparse.Namespace) -> int:
    m = args.frame_slots or Table1Config.AT_IRSA_FRAME_SLOTS
    grid = parse_grid(args.grid) if args.grid else AnalyticConfig.PEAK_GRID
    result = find_peak_load(m, _distribution(args), grid, args.ps_trials, _seed(args), args.workers,
                            fixed_count=not args.binomial)
    if args.output_path is not None:
        DataExporter.export_to_csv(['target_load', 'throughput', 'ps_estimate'], result.curve, args.output_path)
    print(f"m={m}: G*={result.peak_load:g}, S*={result.peak_throughput:.4f}")
    return 0


def cmd_figdata(args: argparse.Namespace) -> int:
    figure = FigureKind.parse(args.figure)
    dist = _distribution(args)
    if args.results is not None:
        records = read_records_csv(args.results)
    else:
        records = []
        specs = figure_experiments(figure, dist,
                                   total_frames=args.total_frames or SimulationConfig.DEFAULT_TOTAL_FRAMES,
                                   replications=args.replications or 1, seed=_seed(args))
        for spec in specs:
            records.extend(_run_with_progress(spec, args.workers, figure.value))

    output = args.output_path or Path(f"{figure.value}.csv")
    emit_fig_data(figure, records, output, dist, args.ps_trials, _seed(args), args.workers)
    print(f"{figure.value}: {output}")
    return 0


def cmd_table1(args: argparse.Namespace) -> int:
    num_users = args.num_users or Table1Config.AT_IRSA_USERS
    frame_slots = args.frame_slots or Table1Config.AT_IRSA_FRAME_SLOTS
    value = args.value
    if value is None:
        grid = parse_grid(args.grid) if args.grid else None
        value = compute_at_irsa_normalized(
            _distribution(args), args.ps_trials, _seed(args), args.workers, grid,
            num_users=num_users, frame_slots=frame_slots)
    print(report_table1(value, num_users, frame_slots))
    return 0


COMMANDS = {
    'simulate': cmd_simulate,
    'sweep': cmd_sweep,
    'analytic': cmd_analytic,
    'peak': cmd_peak,
    'figdata': cmd_figdata,
    'table1': cmd_table1,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """程序入口，返回退出码（参数错误由 argparse 以退出码2结束）"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_file, logging.DEBUG if args.verbose else logging.INFO)
    logger.debug(f"{CliConfig.PROG_NAME} {__version__}: {args.command}")
    try:
        return COMMANDS[args.command](args)
    except Exception as e:
        logger.exception(f"{args.command} 执行失败: {e}")
        return 1


if __name__ == '__main__':
    sys.exit(main())
