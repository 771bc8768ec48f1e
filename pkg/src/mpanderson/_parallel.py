"""Realization-index parallelism.

Workers receive (payload, index) where the payload is an immutable job
description; every per-index result is a pure function of those two
arguments, so the merged output is identical for any worker count.
Results are always returned in index order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")

ENV_WORKERS = "ANDERSON_WORKERS"


def effective_workers(config_value: int, cli_value: int | None = None) -> int:
    """Resolve the worker count: CLI flag beats ANDERSON_WORKERS beats config;
    0 means auto-detect."""
    value = config_value
    env = os.environ.get(ENV_WORKERS)
    if env is not None:
        value = int(env)
    if cli_value is not None:
        value = cli_value
    if value < 0:
        raise ValueError("worker count must be >= 0")
    if value == 0:
        return os.cpu_count() or 1
    return value


def _call(args):
    worker, payload, index = args
    return worker(payload, index)


def run_indexed(worker: Callable[[object, int], T], payload: object, count: int, workers: int = 1) -> list[T]:
    """Evaluate worker(payload, i) for i in 0..count-1, in index order.

    workers counts OS processes; 0 auto-detects, 1 runs inline.
    """
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers == 1 or count <= 1:
        return [worker(payload, i) for i in range(count)]
    tasks = [(worker, payload, i) for i in range(count)]
    chunksize = max(1, count // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, tasks, chunksize=chunksize))
