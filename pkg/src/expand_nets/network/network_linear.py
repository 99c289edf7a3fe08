"""Provides fully-connected layer"""

from typing import Any

import numpy as np

from expand_nets.utils.errors import ShapeError
from .network_layer import Layer, Shape
from .network_types import LayerKind, Mode


class Linear(Layer):
    """Fully-connected layer y = W x + b, weight shape (out_features, in_features)"""

    KIND = LayerKind.LINEAR


    def __init__(self, in_features: int, out_features: int, has_bias: bool = True, dtype: np.dtype = np.float32):
        super().__init__(dtype)
        if min(in_features, out_features) < 1:
            raise ValueError(f"Invalid linear configuration M={in_features} N={out_features}")
        self._in_features = in_features
        self._out_features = out_features
        self._has_bias = has_bias

        self._params["weight"] = np.zeros((out_features, in_features), dtype=self._dtype)
        if has_bias:
            self._params["bias"] = np.zeros(out_features, dtype=self._dtype)


    @property
    def in_features(self) -> int:
        """Getter for in features (M)"""
        return self._in_features


    @property
    def out_features(self) -> int:
        """Getter for out features (N)"""
        return self._out_features


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


    def decayed_param_names(self) -> set[str]:
        return {"weight"}


    def hyperparameters(self) -> dict[str, Any]:
        return {"in_features": self._in_features, "out_features": self._out_features, "has_bias": self._has_bias}


    def output_shape(self, input_shape: Shape) -> Shape:
        if input_shape != (self._in_features,):
            raise ShapeError(f"Linear expects ({self._in_features},), got {input_shape}")
        return (self._out_features,)


    def initialize(self, rng: np.random.Generator):
        std = np.sqrt(2.0 / self._in_features)
        self.weight[...] = rng.normal(0.0, std, self.weight.shape)
        if self._has_bias:
            self.bias.fill(0)


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        _ = mode
        if x.ndim != 2 or x.shape[1] != self._in_features:
            raise ShapeError(f"Linear expects (n, {self._in_features}), got {x.shape}")
        y = x @ self.weight.T
        if self._has_bias:
            y += self.bias
        return y, x


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        grads = {"weight": grad_y.T @ cache}
        if self._has_bias:
            grads["bias"] = grad_y.sum(axis=0)
        return grad_y @ self.weight, grads
