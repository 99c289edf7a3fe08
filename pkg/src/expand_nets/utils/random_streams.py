"""Provides seeded random streams, every stream is keyed by a purpose and optional indices"""

from enum import IntEnum

import numpy as np


class StreamPurpose(IntEnum):
    """Represents what a random stream is used for, keeps streams of different purposes independent"""
    LAYER_INIT = 0
    SHUFFLE = 1
    AUGMENT = 2
    SUBSET = 3
    SYNTHETIC_MEANS = 4
    SYNTHETIC_NOISE = 5
    VERIFY_INPUT = 6


def random_stream(seed: int, purpose: StreamPurpose, *keys: int) -> np.random.Generator:
    """Returns a generator that depends only on seed, purpose and keys"""
    if seed < 0:
        raise ValueError(f"Seed must not be negative {seed}")
    return np.random.default_rng([seed, int(purpose), *keys])
