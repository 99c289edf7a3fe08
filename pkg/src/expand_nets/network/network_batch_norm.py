"""Provides batch normalization layer"""

from typing import Any

import numpy as np

from expand_nets.utils.errors import ShapeError
from .network_layer import Layer, Shape
from .network_types import LayerKind, Mode


class BatchNorm(Layer):
    """Per-channel batch normalization for (n, c, h, w) and (n, c) inputs.
    Trainable scale and shift, running mean and variance as buffers."""

    KIND = LayerKind.BATCH_NORM


    def __init__(self, channels: int, eps: float = 1e-5, momentum: float = 0.1, dtype: np.dtype = np.float32):
        super().__init__(dtype)
        if channels < 1 or eps <= 0 or not 0 <= momentum <= 1:
            raise ValueError(f"Invalid batch norm configuration C={channels} eps={eps} momentum={momentum}")
        self._channels = channels
        self._eps = eps
        self._momentum = momentum

        self._params["scale"] = np.ones(channels, dtype=self._dtype)
        self._params["shift"] = np.zeros(channels, dtype=self._dtype)
        self._buffers["running_mean"] = np.zeros(channels, dtype=self._dtype)
        self._buffers["running_var"] = np.ones(channels, dtype=self._dtype)


    @property
    def channels(self) -> int:
        """Getter for channels"""
        return self._channels


    @property
    def eps(self) -> float:
        """Getter for eps"""
        return self._eps


    @property
    def momentum(self) -> float:
        """Getter for momentum of running statistics"""
        return self._momentum


    def hyperparameters(self) -> dict[str, Any]:
        return {"channels": self._channels, "eps": self._eps, "momentum": self._momentum}


    def output_shape(self, input_shape: Shape) -> Shape:
        if input_shape[0] != self._channels:
            raise ShapeError(f"BatchNorm expects {self._channels} channels, got {input_shape}")
        return input_shape


    def initialize(self, rng: np.random.Generator):
        _ = rng
        self._params["scale"].fill(1)
        self._params["shift"].fill(0)
        self._buffers["running_mean"].fill(0)
        self._buffers["running_var"].fill(1)


    def _axes_and_view(self, x: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if x.ndim not in (2, 4) or x.shape[1] != self._channels:
            raise ShapeError(f"BatchNorm expects (n, {self._channels}[, h, w]), got {x.shape}")
        if x.ndim == 4:
            return (0, 2, 3), (1, -1, 1, 1)
        return (0,), (1, -1)


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        axes, view = self._axes_and_view(x)
        scale = self._params["scale"].reshape(view)
        shift = self._params["shift"].reshape(view)
        if mode == Mode.EVAL:
            inv_std = 1.0 / np.sqrt(self._buffers["running_var"] + self._eps)
            x_hat = (x - self._buffers["running_mean"].reshape(view)) * inv_std.reshape(view)
            return x_hat * scale + shift, (Mode.EVAL, x_hat, inv_std, axes, view)

        count = x.size // self._channels
        if count < 2:
            raise ShapeError(f"BatchNorm needs more than one value per channel in train mode, got {x.shape}")
        mean = x.mean(axis=axes)
        var = x.var(axis=axes)
        inv_std = 1.0 / np.sqrt(var + self._eps)
        x_hat = (x - mean.reshape(view)) * inv_std.reshape(view)

        m = self._momentum
        self._buffers["running_mean"][...] = (1 - m) * self._buffers["running_mean"] + m * mean
        self._buffers["running_var"][...] = (1 - m) * self._buffers["running_var"] + m * var * count / (count - 1)
        return x_hat * scale + shift, (Mode.TRAIN, x_hat, inv_std, axes, view)


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        mode, x_hat, inv_std, axes, view = cache
        grads = {"scale": (grad_y * x_hat).sum(axis=axes), "shift": grad_y.sum(axis=axes)}
        grad_x_hat = grad_y * self._params["scale"].reshape(view)
        if mode == Mode.EVAL:
            return grad_x_hat * inv_std.reshape(view), grads

        count = grad_y.size // self._channels
        sum_grad = grad_x_hat.sum(axis=axes).reshape(view)
        sum_grad_x_hat = (grad_x_hat * x_hat).sum(axis=axes).reshape(view)
        grad_x = inv_std.reshape(view) / count * (count * grad_x_hat - sum_grad - x_hat * sum_grad_x_hat)
        return grad_x, grads
