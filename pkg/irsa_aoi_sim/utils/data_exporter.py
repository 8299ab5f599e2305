"""
数据导出模块
CSV 方言：表头行、逗号分隔、'.' 小数点、无引号，浮点保留10位有效数字
"""
import csv
import math
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from irsa_aoi_sim.config.logging_config import logger
from irsa_aoi_sim.config.settings import ExportConfig
from irsa_aoi_sim.models.access_data import ResultRecord

RECORD_COLUMNS = [
    'protocol', 'U', 'm', 'target_load', 'seed', 'measured_frames', 'throughput',
    'avg_network_aoi', 'normalized_aoi', 'realized_load', 'ps_estimate', 'analytic_aoi',
]
TIMING_COLUMN = 'wall_time_seconds'


def format_value(value: Any) -> str:
    """按导出规则格式化单个字段"""
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if math.isnan(value):
            return 'nan'
        return f"{value:.{ExportConfig.SIGNIFICANT_DIGITS}g}"
    return str(value)


def record_columns(include_timing: bool = ExportConfig.INCLUDE_WALL_TIME) -> List[str]:
    return RECORD_COLUMNS + ([TIMING_COLUMN] if include_timing else [])


def record_row(record: ResultRecord, include_timing: bool = ExportConfig.INCLUDE_WALL_TIME) -> List[str]:
    return [format_value(getattr(record, column)) for column in record_columns(include_timing)]


def summary_path_for(output_path: Path) -> Path:
    """结果文件对应的汇总文件路径: results.csv -> results_summary.csv"""
    output_path = Path(output_path)
    return output_path.with_name(f"{output_path.stem}{ExportConfig.SUMMARY_SUFFIX}{output_path.suffix or '.csv'}")


class RecordCsvWriter:
    """
    结果记录的增量写入器（单一收集者串行写入）

    用法:
        with RecordCsvWriter(path) as writer:
            writer.write(record)
    """

    def __init__(self, output_path: Path, include_timing: bool = ExportConfig.INCLUDE_WALL_TIME):
        self.output_path = Path(output_path)
        self.include_timing = include_timing
        self._file = None
        self._writer = None
        self.count = 0

    def __enter__(self) -> 'RecordCsvWriter':
        try:
            if self.output_path.parent and not self.output_path.parent.exists():
                self.output_path.parent.mkdir(parents=True, exist_ok=True)
            self._file = open(self.output_path, 'w', newline='', encoding=ExportConfig.ENCODING)
        except OSError as e:
            logger.error(f"无法写入输出文件 {self.output_path}: {e}")
            raise
        self._writer = csv.writer(self._file, delimiter=ExportConfig.DELIMITER,
                                  lineterminator='\n', quoting=csv.QUOTE_MINIMAL)
        self._writer.writerow(record_columns(self.include_timing))
        return self

    def write(self, record: ResultRecord) -> None:
        self._writer.writerow(record_row(record, self.include_timing))
        self._file.flush()
        self.count += 1

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._file is not None:
            self._file.close()
        if exc_type is None:
            logger.info(f"已写入 {self.count} 条结果到CSV: {self.output_path}")


class DataExporter:
    """数据导出器"""

    @staticmethod
    def export_to_csv(headers: Sequence[str], rows: Iterable[Sequence[Any]], output_path: Path) -> Path:
        """
        导出表格数据到CSV文件

        Args:
            headers: 表头列表
            rows: 数据行
            output_path: 输出路径

        Returns:
            Path: 输出路径

        Raises:
            OSError: 输出路径不可写
        """
        output_path = Path(output_path)
        try:
            if output_path.parent and not output_path.parent.exists():
                output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, 'w', newline='', encoding=ExportConfig.ENCODING) as f:
                writer = csv.writer(f, delimiter=ExportConfig.DELIMITER, lineterminator='\n')
                writer.writerow(list(headers))
                for row in rows:
                    writer.writerow([format_value(v) for v in row])
        except OSError as e:
            logger.exception(f"导出CSV失败: {e}")
            raise
        logger.info(f"数据已导出到CSV: {output_path}")
        return output_path


def read_records_csv(path: Path) -> List[ResultRecord]:
    """读取结果CSV（用于 figdata 复用已有的 sweep 结果）"""
    def _float(text: str) -> Optional[float]:
        return None if text == '' else float(text)

    records = []
    with open(path, 'r', newline='', encoding=ExportConfig.ENCODING) as f:
        for row in csv.DictReader(f):
            records.append(ResultRecord(
                protocol=row['protocol'],
                U=int(row['U']),
                m=int(row['m']),
                target_load=float(row['target_load']),
                seed=int(row['seed']),
                measured_frames=int(row['measured_frames']),
                throughput=float(row['throughput']),
                avg_network_aoi=float(row['avg_network_aoi']),
                normalized_aoi=float(row['normalized_aoi']),
                realized_load=float(row['realized_load']),
                ps_estimate=float(row['ps_estimate']),
                analytic_aoi=_float(row.get('analytic_aoi', '')),
                wall_time_seconds=float(row.get(TIMING_COLUMN) or 0.0),
            ))
    return records
