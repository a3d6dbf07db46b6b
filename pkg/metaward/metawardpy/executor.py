"""Bounded worker pool for per-pair and per-point work."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

logger = logging.getLogger("metawardpy.executor")

THREADS_ENV = "METAWARD_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def thread_count(default: int = 1) -> int:
    """Worker cap from METAWARD_THREADS; invalid values fall back to ``default``."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring non-integer %s=%r", THREADS_ENV, raw)
        return default
    if value < 1:
        logger.warning("Ignoring %s=%d (must be >= 1)", THREADS_ENV, value)
        return default
    return value


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> list[R]:
    """Map ``fn`` over ``items``; results always come back in input order."""
    items = list(items)
    workers = min(threads or thread_count(), max(len(items), 1))
    if workers <= 1:
        return [fn(item) for item in items]
    logger.debug("Mapping %d items over %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
