"""
应用程序配置和常量
"""
import math


# 仿真配置
class SimulationConfig:
    """仿真引擎默认参数"""
    DEFAULT_TOTAL_FRAMES = 200_000
    DEFAULT_SEED = 20240101
    # 预热帧数 = WARMUP_CYCLES * ceil(U / (m * G))，即约10个轮询周期
    WARMUP_CYCLES = 10
    # 初始时刻所有节点 AoI = m（视作刚完成一次更新）
    INITIAL_AOI_IN_FRAMES = 1
    # 浮点目标负载比较容差
    LOAD_TOLERANCE = 1e-9
    # 批量放置副本时，ℓ * REJECTION_FACTOR <= m 使用拒绝采样，否则使用随机排序
    REJECTION_FACTOR = 4
    # 时隙ALOHA按块生成随机数，避免一次性占用过多内存
    SA_CHUNK_SLOTS = 1_000_000


# 解析模型配置
class AnalyticConfig:
    """解析模型与 p_s 估计配置"""
    DEFAULT_PS_TRIALS = 100_000
    # 峰值负载搜索网格 0.50 .. 0.90，步长 0.02
    PEAK_GRID = tuple(round(0.50 + 0.02 * i, 2) for i in range(21))
    # 已知的峰值负载（帧长 -> G*）
    KNOWN_PEAK_LOADS = {100: 0.66, 400: 0.73}
    IDENTITY_RTOL = 1e-9
    # 每个工作进程处理的 p_s 试验块大小（决定随机流划分，与进程数无关）
    PS_CHUNK_TRIALS = 10_000


# 导出配置
class ExportConfig:
    """CSV导出配置"""
    SIGNIFICANT_DIGITS = 10
    DELIMITER = ','
    ENCODING = 'utf-8'
    INCLUDE_WALL_TIME = False
    SUMMARY_SUFFIX = '_summary'


# 大规模网络对比配置
class Table1Config:
    """渐近归一化网络AoI对比常数 (Δ/U)"""
    SA = math.e
    TA = 1.4169
    SAT = math.e / 2
    MISTA = 0.9641
    AT_IRSA_REFERENCE = 0.6849
    AT_IRSA_USERS = 45_000
    AT_IRSA_FRAME_SLOTS = 800


# 命令行配置
class CliConfig:
    """命令行接口配置"""
    PROG_NAME = 'irsa-aoi'
    DEFAULT_WORKERS = 1
    DEFAULT_REPLICATIONS = 5
    DEFAULT_LAMBDA = '3:1.0'
