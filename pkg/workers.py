"""
Thread pool helper used by the parallel sums and sweeps
"""

from concurrent.futures import ThreadPoolExecutor

from config import thread_count


def ordered_map(fn, items, threads=None):
    """Apply fn to every item; results come back in input order.

    Work is split the same way for any thread count, so callers that reduce
    the returned list in order get identical floats whether this runs on one
    thread or many.
    """
    items = list(items)
    if threads is None:
        threads = thread_count()
    if threads == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
