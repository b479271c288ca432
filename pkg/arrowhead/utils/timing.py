from __future__ import annotations

import statistics
import time
from typing import Any, Callable

REPEATS = 5
WARMUP = 1


def median_time(fn: Callable[[], Any], repeats: int = REPEATS, warmup: int = WARMUP) -> tuple[float, Any]:
    """Median wall time of ``fn()`` over ``repeats`` runs after ``warmup`` discarded runs.

    Returns the median and the result of the last run. The warmup also absorbs numba compilation.
    """
    if repeats < 1:
        raise ValueError(f"need at least one timed run, got {repeats}")
    result = None
    for _ in range(warmup):
        result = fn()
    times = []
    for _ in range(repeats):
        started = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - started)
    return statistics.median(times), result


def timed(fn: Callable[[], Any], enabled: bool = True, repeats: int = REPEATS) -> tuple[float, Any]:
    """:func:`median_time` when ``enabled``, otherwise a single run reported as 0 s."""
    if not enabled:
        return 0.0, fn()
    return median_time(fn, repeats=repeats)
