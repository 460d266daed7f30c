import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "ENSEMBLE_VOL_THREADS"


def thread_count() -> int:
    """Worker cap from ENSEMBLE_VOL_THREADS (unset or 0 means one per CPU)."""
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0")
    return n or (os.cpu_count() or 1)


def ordered_map(func, items):
    """map() over a thread pool; results come back in input order."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
