"""Provides network types"""

from dataclasses import dataclass
from enum import IntEnum


class LayerKind(IntEnum):
    """Represents the kind of a layer, the label is used in model manifests"""
    UNDEFINED = -1
    CONV2D = 0
    LINEAR = 1
    BATCH_NORM = 2
    RELU = 3
    LEAKY_RELU = 4
    MAX_POOL = 5
    FLATTEN = 6


    @property
    def label(self) -> str:
        """Getter for manifest label"""
        return self.name.lower()


    @staticmethod
    def from_label(label: str) -> "LayerKind":
        """Returns kind matching label"""
        for x in LayerKind:
            if x.label == label and x != LayerKind.UNDEFINED:
                return x
        raise ValueError(f"Unknown layer kind {label}")


class Mode(IntEnum):
    """Represents evaluation mode, BatchNorm uses batch statistics in TRAIN and running statistics in EVAL"""
    TRAIN = 0
    EVAL = 1


class InitKind(IntEnum):
    """Represents how parameters of a cloned network are created"""
    KAIMING = 0 # fan-in scaled normal weights, zero biases
    COPY = 1 # copy parameters of the source network
    ZEROS = 2 # all weights and biases zero


@dataclass(frozen=True)
class InitScheme:
    """Parameter initialization scheme"""
    kind: InitKind = InitKind.KAIMING
    seed: int = 0
