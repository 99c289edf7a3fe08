"""Provides a loader for the CIFAR-10 / CIFAR-100 binary format.

CIFAR-10 records are 3073 bytes: label byte, then 3072 pixel bytes as R, G, B planes of 32x32 row-major.
CIFAR-100 records are 3074 bytes: coarse label, fine label, pixels. The fine label is used.
"""

from enum import IntEnum
from pathlib import Path

import numpy as np

from expand_nets.utils.errors import FormatError
from expand_nets.utils.logger import logger
from expand_nets.utils.random_streams import StreamPurpose, random_stream
from .data_types import DatasetHandle, DatasetSplit, NormalizationStats


IMAGE_BYTES = 3 * 32 * 32


class CifarFlavor(IntEnum):
    """Represents CIFAR dataset flavor"""
    CIFAR10 = 10
    CIFAR100 = 100


    @property
    def label(self) -> str:
        """Getter for name used on command line"""
        return self.name.lower()


    @property
    def num_classes(self) -> int:
        """Getter for number of classes"""
        return int(self)


    @property
    def label_bytes(self) -> int:
        """Getter for number of label bytes preceding the pixels"""
        return 1 if self == CifarFlavor.CIFAR10 else 2


    @property
    def record_size(self) -> int:
        """Getter for size of one record in bytes"""
        return self.label_bytes + IMAGE_BYTES


    @property
    def subdirectory(self) -> str:
        """Getter for directory name of the official archive"""
        return "cifar-10-batches-bin" if self == CifarFlavor.CIFAR10 else "cifar-100-binary"


    @property
    def train_files(self) -> dict[str, int]:
        """Getter for train file names with expected record counts"""
        if self == CifarFlavor.CIFAR10:
            return {f"data_batch_{i}.bin": 10000 for i in range(1, 6)}
        return {"train.bin": 50000}


    @property
    def eval_files(self) -> dict[str, int]:
        """Getter for eval file names with expected record counts"""
        if self == CifarFlavor.CIFAR10:
            return {"test_batch.bin": 10000}
        return {"test.bin": 10000}


    @staticmethod
    def from_label(label: str) -> "CifarFlavor":
        """Returns flavor matching label"""
        for x in CifarFlavor:
            if x.label == label:
                return x
        raise ValueError(f"Unknown CIFAR flavor {label}")


def read_cifar_file(path: Path, flavor: CifarFlavor, expected_records: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Reads one binary batch file, returns uint8 images (n, 3, 32, 32) and labels"""
    data = path.read_bytes()
    record_size = flavor.record_size
    if len(data) == 0:
        raise FormatError(f"{path}: empty file", 0)
    if len(data) % record_size != 0:
        raise FormatError(f"{path}: truncated record, file size {len(data)} is not a multiple of {record_size}",
                          len(data) - len(data) % record_size)
    count = len(data) // record_size
    if expected_records is not None and count != expected_records:
        raise FormatError(f"{path}: expected {expected_records} records, found {count}", len(data))

    records = np.frombuffer(data, dtype=np.uint8).reshape(count, record_size)
    labels = records[:, flavor.label_bytes - 1].astype(np.int64)
    invalid = np.flatnonzero(labels >= flavor.num_classes)
    if len(invalid) > 0:
        raise FormatError(f"{path}: label {labels[invalid[0]]} out of range for {flavor.label}",
                          int(invalid[0]) * record_size + flavor.label_bytes - 1)
    images = records[:, flavor.label_bytes:].reshape(count, 3, 32, 32)
    return images, labels


def _resolve_directory(directory: Path, flavor: CifarFlavor) -> Path:
    candidate = directory / flavor.subdirectory
    if candidate.is_dir():
        return candidate
    return directory


def _read_split(directory: Path, flavor: CifarFlavor, files: dict[str, int], strict_counts: bool) -> tuple[np.ndarray, np.ndarray]:
    images, labels = [], []
    for name, expected in files.items():
        path = directory / name
        if not path.is_file():
            raise FileNotFoundError(f"CIFAR file {path} not found")
        x, y = read_cifar_file(path, flavor, expected if strict_counts else None)
        images.append(x)
        labels.append(y)
    return np.concatenate(images), np.concatenate(labels)


def stratified_subset(labels: np.ndarray, num_classes: int, size: int, seed: int) -> np.ndarray:
    """Returns sorted indices of a seeded sample with size // num_classes samples per class
    (the remainder goes to the lowest classes)"""
    per_class = np.full(num_classes, size // num_classes)
    per_class[:size % num_classes] += 1
    rng = random_stream(seed, StreamPurpose.SUBSET)
    result = []
    for c in range(num_classes):
        candidates = np.flatnonzero(labels == c)
        if len(candidates) < per_class[c]:
            raise ValueError(f"Class {c} has {len(candidates)} samples, subset needs {per_class[c]}")
        result.append(rng.choice(candidates, size=per_class[c], replace=False))
    return np.sort(np.concatenate(result))


def load_cifar(directory: str | Path, flavor: CifarFlavor = CifarFlavor.CIFAR10, subset: int | None = None,
               seed: int = 0, strict_counts: bool = True) -> tuple[DatasetHandle, DatasetHandle]:
    """Loads train and eval split, pixels scaled to [0, 1] and standardized per channel with train split stats.
    subset draws a stratified sample of the train split, the eval split is always complete."""
    directory = _resolve_directory(Path(directory), flavor)
    train_images, train_labels = _read_split(directory, flavor, flavor.train_files, strict_counts)
    eval_images, eval_labels = _read_split(directory, flavor, flavor.eval_files, strict_counts)

    if subset is not None:
        indices = stratified_subset(train_labels, flavor.num_classes, subset, seed)
        train_images, train_labels = train_images[indices], train_labels[indices]

    train_scaled = train_images.astype(np.float32) / 255.0
    stats = NormalizationStats.from_images(train_scaled)
    train = DatasetHandle(flavor.label, DatasetSplit.TRAIN, stats.apply(train_scaled), train_labels,
                          flavor.num_classes, stats)
    evaluation = DatasetHandle(flavor.label, DatasetSplit.EVAL, stats.apply(eval_images.astype(np.float32) / 255.0),
                               eval_labels, flavor.num_classes, stats)
    logger().info("Loaded %s, %d train / %d eval samples", flavor.label, len(train), len(evaluation))
    return train, evaluation
