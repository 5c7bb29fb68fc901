"""Seeded, platform-stable random draws.

All randomness goes through PCG64 raw 64-bit words so that a given seed
produces the same stream on every platform and numpy release.  Draws are
consumed in lexicographic pair order.
"""

from __future__ import annotations

import numpy as np

_U64 = 1 << 64


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def generator(seed: int, *stream: int) -> np.random.PCG64:
    """PCG64 keyed by ``seed`` and optional sub-stream indices (e.g. a trial number)."""
    seed = _check_seed(seed)
    if stream:
        return np.random.PCG64(np.random.SeedSequence([seed, *map(int, stream)]))
    return np.random.PCG64(seed)


def raw_bits(bitgen: np.random.PCG64, count: int) -> np.ndarray:
    """``count`` fair coin flips as a uint8 array, LSB-first out of each raw word."""
    words = bitgen.random_raw((count + 63) // 64).astype(np.uint64)
    shifts = np.arange(64, dtype=np.uint64)
    flat = ((words[:, None] >> shifts) & np.uint64(1)).astype(np.uint8).ravel()
    return flat[:count]


def uniforms(bitgen: np.random.PCG64, count: int) -> np.ndarray:
    """``count`` doubles in [0, 1) built from the top 53 bits of each raw word."""
    words = bitgen.random_raw(count).astype(np.uint64)
    return (words >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def permutation(bitgen: np.random.PCG64, n: int) -> list[int]:
    """Fisher-Yates shuffle of ``range(n)`` driven by raw words (modulo bias is irrelevant here)."""
    perm = list(range(n))
    if n < 2:
        return perm
    words = bitgen.random_raw(n - 1)
    for idx, i in enumerate(range(n - 1, 0, -1)):
        j = int(words[idx]) % (i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm
