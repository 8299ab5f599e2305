"""实验编排模块"""
from .experiment_runner import run_experiment, make_record, summarize_records, sort_records

__all__ = [
    'run_experiment',
    'make_record',
    'summarize_records',
    'sort_records'
]
