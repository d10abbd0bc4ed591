"""
Deterministic parallel map.

Filas de grilla, draws aleatorios, restarts y puntos de curva son
independientes; se despachan a un ThreadPoolExecutor (numpy/LAPACK liberan
el GIL) y se recogen con `map`, que conserva el orden de entrada.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

MAX_DEFAULT_WORKERS = 8


def default_workers() -> int:
    return max(1, min(MAX_DEFAULT_WORKERS, os.cpu_count() or 1))


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """map(fn, items) concurrente; el resultado respeta el orden de items."""
    count = default_workers() if workers is None else max(1, workers)
    if count == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(count, len(items))) as executor:
        return list(executor.map(fn, items))
