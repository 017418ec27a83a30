"""General purpose utilities for Monte Carlo loops."""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm


def batches(items, batch_size):
    """
    Iterates through `items` one batch at a time, in order.

        for batch in batches(range(n_samples), 25):
            ...

    Args:
        items: a sequence
        batch_size: the maximum number of items in a batch
    """
    items = list(items)
    for start in range(0, len(items), batch_size):
        yield items[start:start + batch_size]


def parallel_map(fn, items, threads=1, progress=False, desc=None):
    """Apply `fn` to every item on a bounded thread pool; results come back in item order."""
    items = list(items)
    bar = tqdm(total=len(items), desc=desc, disable=not progress, leave=False)
    try:
        if threads <= 1:
            results = []
            for x in items:
                results.append(fn(x))
                bar.update(1)
            return results
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = []
            for y in pool.map(fn, items):
                results.append(y)
                bar.update(1)
            return results
    finally:
        bar.close()


def mean_and_ci(values, z=1.96):
    """Sample mean and the half-width of its normal confidence interval."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return float(values.mean()), 0.0
    return float(values.mean()), float(z * values.std(ddof=1) / np.sqrt(values.size))
