"""Optional thread fan-out for embarrassingly parallel loops.

Set PERITROPE_THREADS to an integer above 1 to enable; anything else
keeps the sequential path, which is the sensible default for the small
instances this package targets.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "PERITROPE_THREADS"


def thread_count():
    raw = os.environ.get(ENV_VAR, "")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def pmap(fn, items):
    """Map preserving order, threaded when PERITROPE_THREADS > 1."""
    items = list(items)
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
