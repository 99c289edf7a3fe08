"""Provides CIFAR augmentation: random horizontal flip and random crop after 4 pixel zero padding"""

import numpy as np


def augment_batch(images: np.ndarray, rng: np.random.Generator, pad: int = 4) -> np.ndarray:
    """Returns augmented copy of (n, c, h, w) images"""
    n, _, h, w = images.shape
    flip = rng.random(n) < 0.5
    result = np.where(flip.reshape(-1, 1, 1, 1), images[..., ::-1], images)
    padded = np.pad(result, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    offsets = rng.integers(0, 2 * pad + 1, size=(n, 2))
    out = np.empty_like(result)
    for i, (dy, dx) in enumerate(offsets):
        out[i] = padded[i, :, dy:dy + h, dx:dx + w]
    return out
