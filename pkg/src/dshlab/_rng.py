"""Seed-splitting and thread-pool plumbing for reproducible Monte Carlo.

All randomness flows through numpy Generators (PCG64 via default_rng)
derived from SeedSequence spawn keys, so every consumer gets an
independent, reconstructible stream:

    stream(seed, (batch_index, role)) -> Generator

Estimates are computed in fixed-size batches; batch b depends only on
(seed, b), and integer batch counts are summed in batch order. The result
is therefore byte-identical no matter how many worker threads run the
batches (DSH_THREADS), or whether a pool is used at all.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

BATCH = 16384


def stream(seed: int, key: tuple[int, ...] = ()) -> np.random.Generator:
    """Independent Generator for (seed, key); key is a spawn path."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def thread_count() -> int:
    """Worker cap from DSH_THREADS (default 1; invalid values mean 1)."""
    raw = os.environ.get("DSH_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def batch_sizes(n: int, batch: int = BATCH) -> list[int]:
    """Split n trials into fixed-size batches (last one ragged)."""
    if n < 0:
        raise ValueError("trial count must be nonnegative")
    full, rem = divmod(n, batch)
    sizes = [batch] * full
    if rem:
        sizes.append(rem)
    return sizes


def run_batches(worker: Callable[[int, int], int], sizes: Sequence[int]) -> int:
    """Run worker(batch_index, batch_size) over all batches; sum in order.

    The worker must depend only on its arguments (plus immutable state),
    not on execution order. Results are summed in batch-index order so the
    total is independent of the thread schedule.
    """
    workers = thread_count()
    if workers <= 1 or len(sizes) <= 1:
        return sum(worker(b, sz) for b, sz in enumerate(sizes))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, b, sz) for b, sz in enumerate(sizes)]
        return sum(f.result() for f in futures)
