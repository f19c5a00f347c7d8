"""Deterministic per-member random streams for parallel-safe reproducibility.

Every stochastic step draws from a private stream keyed by
(master seed, generation, member index, purpose), built on the Philox
counter-based bit generator. Streams for distinct keys are independent, so
results cannot depend on worker count or scheduling order.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

_MASK64 = (1 << 64) - 1


class Purpose(IntEnum):
    INIT = 0
    OPERATOR = 1
    DATASET = 2


def stream(master_seed: int, generation: int, member_index: int, purpose: Purpose) -> np.random.Generator:
    """Independent deterministic generator for one (seed, gen, member, purpose) key."""
    if generation < 0 or member_index < 0:
        raise ValueError("generation and member_index must be nonnegative")
    # Philox takes a 2-word 64-bit key: master seed in one word, the
    # (purpose | generation | member) triple packed into the other.
    word0 = master_seed & _MASK64
    word1 = (
        ((int(purpose) & 0xFF) << 56)
        | ((generation & 0xFFFFFFFF) << 24)
        | (member_index & 0xFFFFFF)
    )
    key = np.array([word0, word1], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
