"""Provides convolution layer"""

from typing import Any

import numpy as np

from expand_nets.tensor.tensor_ops import conv2d_backward, conv2d_forward, conv2d_output_size
from expand_nets.utils.errors import ShapeError
from .network_layer import Layer, Shape
from .network_types import LayerKind, Mode


class Conv2d(Layer):
    """Square k x k convolution, weight shape (out_channels, in_channels, k, k).
    has_bias False means no bias storage exists at all."""

    KIND = LayerKind.CONV2D


    def __init__(self, in_channels: int, out_channels: int, kernel_size: int, stride: int = 1,
                 padding: int = 0, has_bias: bool = True, dtype: np.dtype = np.float32):
        super().__init__(dtype)
        if min(in_channels, out_channels, kernel_size, stride) < 1 or padding < 0:
            raise ValueError(f"Invalid conv2d configuration M={in_channels} N={out_channels} "
                             f"k={kernel_size} s={stride} p={padding}")
        if kernel_size % 2 == 0:
            raise ValueError(f"Conv2d kernel size must be odd {kernel_size}")
        self._in_channels = in_channels
        self._out_channels = out_channels
        self._kernel_size = kernel_size
        self._stride = stride
        self._padding = padding
        self._has_bias = has_bias

        self._params["weight"] = np.zeros((out_channels, in_channels, kernel_size, kernel_size), dtype=self._dtype)
        if has_bias:
            self._params["bias"] = np.zeros(out_channels, dtype=self._dtype)


    @property
    def in_channels(self) -> int:
        """Getter for in channels (M)"""
        return self._in_channels


    @property
    def out_channels(self) -> int:
        """Getter for out channels (N)"""
        return self._out_channels


    @property
    def kernel_size(self) -> int:
        """Getter for kernel size (k)"""
        return self._kernel_size


    @property
    def stride(self) -> int:
        """Getter for stride (s)"""
        return self._stride


    @property
    def padding(self) -> int:
        """Getter for padding (p)"""
        return self._padding


    @property
    def has_bias(self) -> bool:
        """Getter for has bias"""
        return self._has_bias


    @property
    def weight(self) -> np.ndarray:
        """Getter for weight"""
        return self._params["weight"]


    @property
    def bias(self) -> np.ndarray | None:
        """Getter for bias, None if layer has no bias"""
        return self._params.get("bias")


    @property
    def is_pointwise(self) -> bool:
        """True for 1x1, stride 1, padding 0 convolutions (pure channel mixing)"""
        return self._kernel_size == 1 and self._stride == 1 and self._padding == 0


    def decayed_param_names(self) -> set[str]:
        return {"weight"}


    def hyperparameters(self) -> dict[str, Any]:
        return {"in_channels": self._in_channels, "out_channels": self._out_channels,
                "kernel_size": self._kernel_size, "stride": self._stride,
                "padding": self._padding, "has_bias": self._has_bias}


    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3 or input_shape[0] != self._in_channels:
            raise ShapeError(f"Conv2d expects ({self._in_channels}, h, w), got {input_shape}")
        out_h = conv2d_output_size(input_shape[1], self._kernel_size, self._stride, self._padding)
        out_w = conv2d_output_size(input_shape[2], self._kernel_size, self._stride, self._padding)
        if out_h < 1 or out_w < 1:
            raise ShapeError(f"Conv2d output size {out_h}x{out_w} not positive for input {input_shape}")
        return self._out_channels, out_h, out_w


    def initialize(self, rng: np.random.Generator):
        fan_in = self._in_channels * self._kernel_size * self._kernel_size
        std = np.sqrt(2.0 / fan_in)
        self.weight[...] = rng.normal(0.0, std, self.weight.shape)
        if self._has_bias:
            self.bias.fill(0)


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        _ = mode
        y = conv2d_forward(x, self.weight, self.bias, self._stride, self._padding)
        return y, x


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        grad_x, grad_weight, grad_bias = conv2d_backward(grad_y, cache, self.weight, self._stride,
                                                         self._padding, self._has_bias)
        grads = {"weight": grad_weight}
        if self._has_bias:
            grads["bias"] = grad_bias
        return grad_x, grads
