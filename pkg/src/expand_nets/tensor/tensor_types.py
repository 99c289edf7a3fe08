"""Provides tensor types and shape checks.

Tensors are plain numpy arrays. Tensor4 is laid out (n, c, h, w), ConvKernel (N, M, k, k),
Matrix (rows, cols). Convolutions follow the cross-correlation convention (no kernel flip),
composition of kernels in the compression package depends on that.
"""

from enum import IntEnum
from typing import TypeAlias

import numpy as np

from expand_nets.utils.errors import ShapeError


Tensor4: TypeAlias = np.ndarray
ConvKernel: TypeAlias = np.ndarray
Matrix: TypeAlias = np.ndarray
Vector: TypeAlias = np.ndarray


class TensorDType(IntEnum):
    """Represents supported scalar types, float64 for verification and float32 for training"""
    FLOAT32 = 0
    FLOAT64 = 1


    @property
    def numpy_dtype(self) -> np.dtype:
        """Getter for matching numpy dtype"""
        return np.dtype(np.float32) if self == TensorDType.FLOAT32 else np.dtype(np.float64)


    @property
    def label(self) -> str:
        """Getter for name used in manifests and on command line"""
        return "float32" if self == TensorDType.FLOAT32 else "float64"


    @staticmethod
    def from_label(label: str) -> "TensorDType":
        """Returns dtype matching label"""
        for x in TensorDType:
            if x.label == label:
                return x
        raise ValueError(f"Unknown dtype {label}")


def check_tensor4(x: Tensor4, name: str = "input"):
    """Checks that x is a 4-D tensor with all dimensions >= 1"""
    if x.ndim != 4:
        raise ShapeError(f"{name} must be 4-D (n, c, h, w), got shape {x.shape}")
    if min(x.shape) < 1:
        raise ShapeError(f"{name} dimensions must be >= 1, got shape {x.shape}")


def check_conv_kernel(kernel: ConvKernel):
    """Checks that kernel is a square odd (N, M, k, k) kernel"""
    if kernel.ndim != 4:
        raise ShapeError(f"Conv kernel must be 4-D (N, M, k, k), got shape {kernel.shape}")
    if kernel.shape[2] != kernel.shape[3]:
        raise ShapeError(f"Conv kernel must be square, got {kernel.shape[2]}x{kernel.shape[3]}")
    if kernel.shape[2] % 2 == 0:
        raise ShapeError(f"Conv kernel size must be odd, got {kernel.shape[2]}")


def check_matrix(a: Matrix, name: str = "matrix"):
    """Checks that a is 2-D"""
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
