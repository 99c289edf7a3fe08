"""Provides flatten layer"""

from math import prod
from typing import Any

import numpy as np

from .network_layer import Layer, Shape
from .network_types import LayerKind, Mode


class Flatten(Layer):
    """Flattens (n, c, h, w) into (n, c*h*w) in channel-major order"""

    KIND = LayerKind.FLATTEN


    def output_shape(self, input_shape: Shape) -> Shape:
        return (prod(input_shape),)


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        _ = mode
        return x.reshape(x.shape[0], -1), x.shape


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        return grad_y.reshape(cache), {}
