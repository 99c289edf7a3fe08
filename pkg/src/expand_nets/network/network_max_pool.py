"""Provides max pooling layer"""

from typing import Any

import numpy as np

from expand_nets.tensor.tensor_ops import conv2d_output_size, maxpool2d, maxpool2d_backward
from expand_nets.utils.errors import ShapeError
from .network_layer import Layer, Shape
from .network_types import LayerKind, Mode


class MaxPool(Layer):
    """k x k max pooling with stride, ties route the gradient to the lowest index"""

    KIND = LayerKind.MAX_POOL


    def __init__(self, kernel_size: int = 2, stride: int = 2, dtype: np.dtype = np.float32):
        super().__init__(dtype)
        if kernel_size < 1 or stride < 1:
            raise ValueError(f"Invalid max pool configuration k={kernel_size} s={stride}")
        self._kernel_size = kernel_size
        self._stride = stride


    @property
    def kernel_size(self) -> int:
        """Getter for kernel size"""
        return self._kernel_size


    @property
    def stride(self) -> int:
        """Getter for stride"""
        return self._stride


    def hyperparameters(self) -> dict[str, Any]:
        return {"kernel_size": self._kernel_size, "stride": self._stride}


    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3 or min(input_shape[1:]) < self._kernel_size:
            raise ShapeError(f"MaxPool {self._kernel_size}x{self._kernel_size} does not fit input {input_shape}")
        return (input_shape[0],
                conv2d_output_size(input_shape[1], self._kernel_size, self._stride, 0),
                conv2d_output_size(input_shape[2], self._kernel_size, self._stride, 0))


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        _ = mode
        y, argmax = maxpool2d(x, self._kernel_size, self._stride)
        return y, (argmax, x.shape)


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        argmax, input_shape = cache
        return maxpool2d_backward(grad_y, argmax, input_shape), {}
