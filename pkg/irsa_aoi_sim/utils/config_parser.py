"""
配置解析模块
负责副本分布文本语法与 TOML 实验文件的读取和校验
"""
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from irsa_aoi_sim.config.logging_config import logger
from irsa_aoi_sim.config.settings import CliConfig
from irsa_aoi_sim.models.access_data import (
    DegreeDistribution,
    ExperimentSpec,
    SimConfig,
    create_sim_config_from_dict,
    validate_distribution,
)
from irsa_aoi_sim.models.errors import ConfigurationError, DistributionError

SWEEPABLE_AXES = ('num_users', 'frame_slots', 'target_load')

EXPERIMENT_KEYS = {
    'protocol', 'num_users', 'frame_slots', 'target_load', 'distribution', 'lambda',
    'total_frames', 'warmup_frames', 'seed', 'replications', 'output_path', 'analytic',
    'include_timing', 'sweep',
}


def parse_distribution(text: str) -> DegreeDistribution:
    """
    解析 `degree:probability` 逗号分隔文本，例如 `3:1.0` 或 `2:0.5,3:0.5`

    Raises:
        DistributionError: 语法错误或分布不合法
    """
    pairs = []
    for item in str(text).split(','):
        item = item.strip()
        if not item:
            continue
        parts = item.split(':')
        if len(parts) != 2:
            raise DistributionError(f"无法解析分布项: '{item}' (应为 degree:probability)")
        try:
            degree = int(parts[0].strip())
            prob = float(parts[1].strip())
        except ValueError:
            raise DistributionError(f"无法解析分布项: '{item}'") from None
        pairs.append((degree, prob))
    return validate_distribution(pairs)


class ExperimentFileValidator:
    """实验文件内容验证器"""

    @staticmethod
    def validate_keys(data: Mapping[str, Any]) -> Tuple[bool, List[str]]:
        """
        验证键名与扫描轴

        Returns:
            Tuple[bool, List[str]]: (是否有效, 错误消息列表)
        """
        errors = []
        for key in data:
            if key not in EXPERIMENT_KEYS:
                errors.append(f"未知配置项: {key}")

        sweep = data.get('sweep', {})
        if not isinstance(sweep, Mapping):
            errors.append("sweep 必须为表")
        else:
            for axis, values in sweep.items():
                if axis not in SWEEPABLE_AXES:
                    errors.append(f"不支持的扫描轴: {axis}")
                elif not isinstance(values, list) or not values:
                    errors.append(f"扫描轴 {axis} 必须为非空列表")

        replications = data.get('replications', 1)
        if not isinstance(replications, int) or replications < 1:
            errors.append(f"重复次数必须为正整数: {replications}")
        return len(errors) == 0, errors

    @staticmethod
    def validate_sweep_points(spec: ExperimentSpec) -> Tuple[bool, List[str]]:
        """逐个代入扫描值，确认 SimConfig 约束成立"""
        errors = []
        for point in spec.sweep_points():
            try:
                spec.point_config(point)
            except ConfigurationError as e:
                errors.append(f"{point}: {e}")
        return len(errors) == 0, errors


def read_experiment_file(file_path: str) -> Dict[str, Any]:
    """
    读取 TOML 实验文件

    Raises:
        FileNotFoundError: 文件不存在
        ConfigurationError: TOML 语法错误
    """
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"文件不存在: {file_path}")
    try:
        with open(file_path, 'rb') as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"实验文件语法错误 {file_path}: {e}") from e
    logger.info(f"成功读取实验文件 {os.path.basename(file_path)}")
    return data


def build_experiment_spec(data: Mapping[str, Any],
                          overrides: Optional[Mapping[str, Any]] = None) -> ExperimentSpec:
    """
    由实验文件内容构造 ExperimentSpec；overrides（命令行参数）优先

    Args:
        data: 实验文件内容（扁平键 + [sweep] 表）
        overrides: 非 None 的命令行覆盖值
    """
    merged = dict(data)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    if 'lambda' in merged:
        merged['distribution'] = merged.pop('lambda')
    merged.setdefault('distribution', CliConfig.DEFAULT_LAMBDA)

    valid, errors = ExperimentFileValidator.validate_keys(merged)
    if not valid:
        raise ConfigurationError("; ".join(errors))

    sweep = {axis: list(values) for axis, values in merged.get('sweep', {}).items()}
    # 扫描轴的第一个值作为基准配置的缺省值
    base_fields = dict(merged)
    for axis, values in sweep.items():
        base_fields.setdefault(axis, values[0])
    base = create_sim_config_from_dict(base_fields)

    output = merged.get('output_path')
    spec = ExperimentSpec(
        base=base,
        sweep_axes=sweep,
        replications=int(merged.get('replications', 1)),
        output_path=Path(output) if output else None,
        analytic=bool(merged.get('analytic', False)),
        include_timing=bool(merged.get('include_timing', False)),
        fixed_warmup=None if merged.get('warmup_frames') is None else int(merged['warmup_frames']),
    )
    valid, errors = ExperimentFileValidator.validate_sweep_points(spec)
    if not valid:
        raise ConfigurationError("; ".join(errors))
    return spec


# 便捷函数
def load_experiment_spec(file_path: str, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentSpec:
    """读取并校验实验文件"""
    return build_experiment_spec(read_experiment_file(file_path), overrides)
