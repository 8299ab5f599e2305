"""数据模型模块"""
from .errors import ConfigurationError, DistributionError, MissingResultsError
from .access_data import (
    Protocol,
    DegreeDistribution,
    SimConfig,
    FrameOccupancy,
    NodeState,
    ThresholdFeedback,
    SlotCensus,
    DecodeOutcome,
    RunMetrics,
    AnalyticInput,
    ExperimentSpec,
    ResultRecord,
    validate_distribution,
    create_sim_config_from_dict
)

__all__ = [
    'ConfigurationError',
    'DistributionError',
    'MissingResultsError',
    'Protocol',
    'DegreeDistribution',
    'SimConfig',
    'FrameOccupancy',
    'NodeState',
    'ThresholdFeedback',
    'SlotCensus',
    'DecodeOutcome',
    'RunMetrics',
    'AnalyticInput',
    'ExperimentSpec',
    'ResultRecord',
    'validate_distribution',
    'create_sim_config_from_dict'
]
