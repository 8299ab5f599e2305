"""配置模块"""
from irsa_aoi_sim.config.settings import *
from irsa_aoi_sim.config.logging_config import setup_logging, logger

__all__ = [
    'setup_logging',
    'logger',
    'SimulationConfig',
    'AnalyticConfig',
    'ExportConfig',
    'Table1Config',
    'CliConfig'
]
