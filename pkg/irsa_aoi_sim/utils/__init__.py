"""工具函数模块"""
from .random_streams import (
    StreamPurpose,
    spawn_stream,
    derive_seed,
    sample_degree,
    sample_degrees,
    place_replicas,
    place_replicas_batch
)
from .config_parser import parse_distribution, load_experiment_spec, build_experiment_spec
from .data_exporter import DataExporter, RecordCsvWriter

__all__ = [
    'StreamPurpose',
    'spawn_stream',
    'derive_seed',
    'sample_degree',
    'sample_degrees',
    'place_replicas',
    'place_replicas_batch',
    'parse_distribution',
    'load_experiment_spec',
    'build_experiment_spec',
    'DataExporter',
    'RecordCsvWriter'
]
