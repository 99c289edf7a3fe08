"""Provides dataset types"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Any

import numpy as np


class DatasetSplit(IntEnum):
    """Represents dataset split"""
    TRAIN = 0
    EVAL = 1


@dataclass(frozen=True)
class NormalizationStats:
    """Per-channel standardization statistics computed on a train split"""
    mean: tuple[float, ...]
    std: tuple[float, ...]


    @staticmethod
    def from_images(images: np.ndarray) -> "NormalizationStats":
        """Computes per-channel mean and std of (n, c, h, w) images"""
        mean = images.mean(axis=(0, 2, 3), dtype=np.float64)
        std = images.std(axis=(0, 2, 3), dtype=np.float64)
        std[std == 0] = 1.0
        return NormalizationStats(tuple(float(x) for x in mean), tuple(float(x) for x in std))


    def apply(self, images: np.ndarray) -> np.ndarray:
        """Returns standardized float32 images"""
        mean = np.asarray(self.mean, dtype=np.float32).reshape(1, -1, 1, 1)
        std = np.asarray(self.std, dtype=np.float32).reshape(1, -1, 1, 1)
        return ((images.astype(np.float32) - mean) / std).astype(np.float32)


    def to_dict(self) -> dict[str, Any]:
        """Returns JSON compatible dict"""
        return {"method": "per-channel standardization, train split statistics",
                "mean": list(self.mean), "std": list(self.std)}


@dataclass(frozen=True)
class DatasetHandle:
    """Immutable set of normalized (n, 3, 32, 32) images with integer labels"""
    name: str
    split: DatasetSplit
    images: np.ndarray
    labels: np.ndarray
    num_classes: int
    stats: NormalizationStats


    def __post_init__(self):
        if self.images.ndim != 4 or len(self.images) != len(self.labels):
            raise ValueError(f"Dataset {self.name}: {self.images.shape} images do not match {self.labels.shape} labels")
        if len(self.labels) > 0 and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise ValueError(f"Dataset {self.name}: labels outside [0, {self.num_classes})")
        self.images.flags.writeable = False
        self.labels.flags.writeable = False


    def __len__(self) -> int:
        return len(self.labels)


    def class_counts(self) -> np.ndarray:
        """Number of samples per class"""
        return np.bincount(self.labels, minlength=self.num_classes)
