"""Seeded generators.

All randomness goes through Philox (a counter-based generator) keyed by a
``SeedSequence`` built from the user seed plus integer stream keys, so a
given ``(seed, *keys)`` always yields the same stream on every platform.
"""

from __future__ import annotations

import numpy as np

SEED_MAX = 2**64 - 1


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    if not 0 <= int(seed) <= SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *keys])))
