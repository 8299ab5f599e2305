"""
工作进程池模块
把相互独立的任务（扫描点 × 重复实验、p_s 试验块）调度到进程池，
结果按提交顺序返回，由调用方单一收集者串行写出。
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable, Iterator, List, Optional

from tqdm import tqdm

from irsa_aoi_sim.config.logging_config import logger

ProgressCallback = Callable[[int, int], None]


class ReplicationWorkerPool:
    """
    任务池

    Callbacks:
        progress(done, total): 每完成一个任务调用一次
    """

    def __init__(self, workers: int = 1, progress: Optional[ProgressCallback] = None):
        self.workers = max(1, int(workers))
        self.progress = progress
        self._is_cancelled = False

    def cancel(self):
        """请求取消处理（已完成的结果仍会返回）"""
        self._is_cancelled = True

    @property
    def cancelled(self) -> bool:
        return self._is_cancelled

    def _report(self, done: int, total: int) -> None:
        if self.progress is not None:
            self.progress(done, total)

    def imap(self, func: Callable[[Any], Any], tasks: Iterable[Any]) -> Iterator[Any]:
        """
        按提交顺序逐个产出结果

        Args:
            func: 模块级函数（多进程时需可序列化）
            tasks: 任务参数
        """
        tasks = list(tasks)
        total = len(tasks)

        if self.workers == 1 or total <= 1:
            for done, task in enumerate(tasks, start=1):
                if self._is_cancelled:
                    logger.warning(f"任务已取消，完成 {done - 1}/{total}")
                    return
                result = func(task)
                self._report(done, total)
                yield result
            return

        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            futures = [executor.submit(func, task) for task in tasks]
            try:
                for done, future in enumerate(futures, start=1):
                    if self._is_cancelled:
                        logger.warning(f"任务已取消，完成 {done - 1}/{total}")
                        return
                    try:
                        result = future.result()
                    except Exception:
                        logger.exception("工作进程任务失败")
                        raise
                    self._report(done, total)
                    yield result
            finally:
                for future in futures:
                    future.cancel()

    def map(self, func: Callable[[Any], Any], tasks: Iterable[Any]) -> List[Any]:
        return list(self.imap(func, tasks))


class TqdmProgress:
    """把 progress(done, total) 回调显示为 tqdm 进度条（输出到 stderr）"""

    def __init__(self, desc: str, unit: str = 'run', disable: bool = False):
        self.desc = desc
        self.unit = unit
        self.disable = disable
        self._bar = None

    def __call__(self, done: int, total: int) -> None:
        if self._bar is None:
            self._bar = tqdm(total=total, desc=self.desc, unit=self.unit, leave=False, disable=self.disable)
        self._bar.update(done - self._bar.n)

    def close(self) -> None:
        if self._bar is not None:
            self._bar.close()
            self._bar = None
