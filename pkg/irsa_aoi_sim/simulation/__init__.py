"""仿真引擎模块"""
from .aoi_tracker import AoiAccumulator, accumulate_aoi
from .protocols import (
    compute_threshold,
    run_irsa,
    run_at_irsa,
    run_slotted_aloha,
    run_protocol,
    FrameSimulator
)

__all__ = [
    'AoiAccumulator',
    'accumulate_aoi',
    'compute_threshold',
    'run_irsa',
    'run_at_irsa',
    'run_slotted_aloha',
    'run_protocol',
    'FrameSimulator'
]
