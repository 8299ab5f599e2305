"""任务调度模块"""
from .worker_threads import ReplicationWorkerPool, TqdmProgress

__all__ = [
    'ReplicationWorkerPool',
    'TqdmProgress'
]
