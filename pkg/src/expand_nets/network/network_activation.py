"""Provides parameter free activation layers"""

from typing import Any

import numpy as np

from .network_layer import Layer
from .network_types import LayerKind, Mode


class ReLU(Layer):
    """Rectified linear unit"""

    KIND = LayerKind.RELU


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        _ = mode
        mask = x > 0
        return x * mask, mask


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        return grad_y * cache, {}


class LeakyReLU(Layer):
    """Leaky rectified linear unit, negative inputs are multiplied by slope"""

    KIND = LayerKind.LEAKY_RELU


    def __init__(self, slope: float = 0.1, dtype: np.dtype = np.float32):
        super().__init__(dtype)
        self._slope = slope


    @property
    def slope(self) -> float:
        """Getter for slope"""
        return self._slope


    def hyperparameters(self) -> dict[str, Any]:
        return {"slope": self._slope}


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        _ = mode
        factor = np.where(x > 0, 1.0, self._slope).astype(x.dtype)
        return x * factor, factor


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        return grad_y * cache, {}
