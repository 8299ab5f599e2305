"""领域异常定义"""


class DistributionError(ValueError):
    """副本数分布 Λ(x) 不合法"""


class ConfigurationError(ValueError):
    """仿真/实验配置违反约束"""


class MissingResultsError(RuntimeError):
    """生成图表数据时缺少所需的实验结果"""
