"""数据分析模块"""
from .sic_decoder import classify_slots, decode_frame
from .aoi_models import (
    irsa_aoi,
    sa_aoi,
    inter_update_moments,
    at_irsa_aoi_approx
)
from .throughput_estimator import estimate_ps, find_peak_load, PsEstimate, PeakLoadResult
from .statistical_analysis import StatisticalAnalyzer

__all__ = [
    'classify_slots',
    'decode_frame',
    'irsa_aoi',
    'sa_aoi',
    'inter_update_moments',
    'at_irsa_aoi_approx',
    'estimate_ps',
    'find_peak_load',
    'PsEstimate',
    'PeakLoadResult',
    'StatisticalAnalyzer'
]
