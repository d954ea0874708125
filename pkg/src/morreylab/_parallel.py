"""Fixed-partition parallel map.

Work is split into blocks whose boundaries depend only on the problem size,
never on the thread count, and each block reduces its own rows in a fixed
order. Results are therefore bit-identical for any ``MORREYLAB_THREADS``.
"""

import os
from concurrent.futures import ThreadPoolExecutor

BLOCK_ROWS = 256


def thread_count():
    raw = os.environ.get("MORREYLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def blocks(n_rows, block=BLOCK_ROWS):
    return [(start, min(start + block, n_rows)) for start in range(0, n_rows, block)]


def map_blocks(func, n_rows, block=BLOCK_ROWS):
    """Call ``func(start, stop)`` on every block and return results in block order."""
    spans = blocks(n_rows, block)
    threads = thread_count()
    if threads == 1 or len(spans) == 1:
        return [func(a, b) for a, b in spans]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda span: func(*span), spans))
