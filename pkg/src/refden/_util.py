"""Small shared helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def ordered_map(fn, items, threads: int = 1) -> list:
    """Map preserving input order, optionally across a thread pool.

    Results are gathered by index, so the output is identical for any thread
    count; numpy's LAPACK calls release the GIL, which is where the
    parallelism pays off.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
