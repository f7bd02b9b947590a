"""
有序并行执行

包装标准库 multiprocessing.pool.ThreadPool：with 退出时 close + join，
run_ordered 按输入顺序收集结果，workers ≤ 1 时直接串行执行。
"""

import logging
from collections.abc import Callable, Iterable
from multiprocessing.pool import ThreadPool as _ThreadPool
from types import TracebackType
from typing import Any, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")

__all__ = ["ThreadPool", "run_ordered"]


class ThreadPool(_ThreadPool):
    """退出上下文时优雅关闭的线程池"""

    def __enter__(self) -> "ThreadPool":
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: TracebackType | None,
    ) -> bool:
        # close 禁止再提交，join 等待在途任务
        self.close()
        self.join()
        return False


def run_ordered(func: Callable[[Any], T], items: Iterable[Any], workers: int = 1) -> list[T]:
    """
    对每个元素执行 func，结果顺序与输入一致

    Args:
        func: 单参数函数
        items: 输入序列
        workers: 线程数，≤ 1 表示串行

    Returns:
        结果列表
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    size = min(workers, len(items))
    logger.debug(f"running {len(items)} task(s) on {size} thread(s)")
    with ThreadPool(size) as pool:
        return pool.map(func, items)
