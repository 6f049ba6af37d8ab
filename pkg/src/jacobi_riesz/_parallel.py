"""Row-chunked thread parallelism with schedule-independent results."""

from concurrent.futures import ThreadPoolExecutor
import os

import numpy as np

THREADS_ENV = "JACOBI_RIESZ_THREADS"


def resolve_threads(threads=None):
    if threads is None:
        threads = os.environ.get(THREADS_ENV, "1")
    if isinstance(threads, str):
        threads = (os.cpu_count() or 1) if threads == "auto" else int(threads)
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    return int(threads)


def map_row_blocks(fn, nrows, threads=None, min_block=8):
    """Evaluate ``fn(lo, hi)`` on row ranges and stack the results in order.

    Every entry is produced by elementwise operations inside one call, so
    the stacked result does not depend on how rows are split.
    """
    threads = resolve_threads(threads)
    if threads == 1 or nrows <= min_block:
        return fn(0, nrows)
    nblocks = min(nrows, threads * 4)
    edges = np.linspace(0, nrows, nblocks + 1).round().astype(int)
    spans = [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda s: fn(*s), spans))
    return np.concatenate(parts, axis=0)
