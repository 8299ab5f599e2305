"""报表模块"""
from .table_report import report_table1, compute_at_irsa_normalized
from .figure_data import FigureKind, emit_fig_data, figure_experiments

__all__ = [
    'report_table1',
    'compute_at_irsa_normalized',
    'FigureKind',
    'emit_fig_data',
    'figure_experiments'
]
