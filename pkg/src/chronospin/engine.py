"""Seeded block-parallel Monte Carlo driver.

Trials are cut into fixed-size blocks.  Block ``b`` of stream ``salt`` draws
from ``SeedSequence(seed, spawn_key=(salt, b))``, so the randomness used by
trial ``i`` depends only on ``(seed, salt, i)`` and never on how blocks are
distributed over workers.  Kernels return integer count vectors that are
summed, which keeps the reduction exact and order-free.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator

import numpy as np

BLOCK_SIZE = 8192
# first-measurement ticks and delays are drawn from [0, TICK_SPAN); the
# span stands in for timing that is far coarser than one tick
TICK_SPAN = 2**32


def block_rng(seed: int, salt: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(salt), int(block)))
    return np.random.Generator(np.random.PCG64(ss))


def blocks(trials: int, block_size: int = BLOCK_SIZE) -> list[tuple[int, int, int]]:
    """``(block_index, first_trial, size)`` for every block."""
    return [(b, lo, min(block_size, trials - lo))
            for b, lo in enumerate(range(0, trials, block_size))]


def iter_blocks(trials: int, seed: int, salt: int = 0
                ) -> Iterator[tuple[int, np.random.Generator, int]]:
    for b, lo, size in blocks(trials):
        yield lo, block_rng(seed, salt, b), size


def count_trials(kernel: Callable[[np.random.Generator, int], np.ndarray],
                 trials: int, seed: int, *, salt: int = 0, workers: int = 1
                 ) -> np.ndarray:
    """Run ``kernel(rng, size)`` on every block and sum the count vectors."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    def one(block):
        b, _, size = block
        return np.asarray(kernel(block_rng(seed, salt, b), size), dtype=np.int64)

    todo = blocks(trials)
    if workers == 1 or len(todo) == 1:
        parts = [one(blk) for blk in todo]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, todo))
    return np.sum(parts, axis=0)


def draw_ticks(rng: np.random.Generator, size: int, policy: str = "uniform-parity"
               ) -> np.ndarray:
    """Tick counts whose parity follows ``policy``."""
    n = rng.integers(0, TICK_SPAN, size=size, dtype=np.int64)
    if policy == "uniform-parity":
        return n
    if policy == "fixed-even":
        return n & ~np.int64(1)
    if policy == "fixed-odd":
        return n | np.int64(1)
    raise ValueError(f"unknown delay policy {policy!r}")
