"""Provides synthetic Gaussian class blob datasets for fast runs"""

import numpy as np

from expand_nets.utils.random_streams import StreamPurpose, random_stream
from .data_types import DatasetHandle, DatasetSplit, NormalizationStats


def _class_means(num_classes: int, seed: int) -> np.ndarray:
    """Low frequency class patterns, 8x8 blocks upsampled to 32x32"""
    rng = random_stream(seed, StreamPurpose.SYNTHETIC_MEANS)
    coarse = rng.normal(0.0, 1.0, (num_classes, 3, 8, 8))
    return coarse.repeat(4, axis=2).repeat(4, axis=3)


def synthetic_dataset(num_classes: int, n: int, seed: int, split: DatasetSplit = DatasetSplit.TRAIN,
                      noise: float = 0.5, stats: NormalizationStats | None = None) -> DatasetHandle:
    """Returns n balanced samples, class mean plus Gaussian noise. Splits of the same seed share class means
    but draw independent noise. stats defaults to the statistics of the generated images."""
    if num_classes < 1 or n < 1:
        raise ValueError(f"Synthetic dataset needs positive class count and size, got {num_classes}, {n}")
    rng = random_stream(seed, StreamPurpose.SYNTHETIC_NOISE, int(split))
    labels = rng.permutation(np.arange(n) % num_classes).astype(np.int64)
    images = _class_means(num_classes, seed)[labels] + rng.normal(0.0, noise, (n, 3, 32, 32))
    if stats is None:
        stats = NormalizationStats.from_images(images)
    return DatasetHandle("synthetic", split, stats.apply(images), labels, num_classes, stats)


def synthetic_split(num_classes: int, n_train: int, n_eval: int, seed: int,
                    noise: float = 0.5) -> tuple[DatasetHandle, DatasetHandle]:
    """Returns train and eval split, eval is normalized with train statistics"""
    train = synthetic_dataset(num_classes, n_train, seed, DatasetSplit.TRAIN, noise)
    evaluation = synthetic_dataset(num_classes, n_eval, seed, DatasetSplit.EVAL, noise, train.stats)
    return train, evaluation
