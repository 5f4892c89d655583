"""Small internal helpers shared by the analysis modules."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], jobs: int) -> list[R]:
    """Map fn over items, preserving input order in the result.

    With jobs > 1 the work runs on a thread pool; results still come back
    in input order, so reductions stay deterministic regardless of jobs.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
