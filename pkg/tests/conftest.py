"""Shared fixtures"""

import numpy as np
import pytest

from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_types import Mode


def naive_conv2d(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray | None, stride: int, padding: int) -> np.ndarray:
    """Direct loop cross-correlation used as reference"""
    n, _, h, w = x.shape
    out_channels, _, k, _ = kernel.shape
    xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    out_h = (h + 2 * padding - k) // stride + 1
    out_w = (w + 2 * padding - k) // stride + 1
    y = np.zeros((n, out_channels, out_h, out_w), dtype=np.float64)
    for i in range(out_h):
        for j in range(out_w):
            patch = xp[:, :, i * stride:i * stride + k, j * stride:j * stride + k]
            y[:, :, i, j] = np.einsum("bchw,ochw->bo", patch, kernel)
    if bias is not None:
        y += bias.reshape(1, -1, 1, 1)
    return y


def numeric_gradient(f, x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Central finite differences of scalar function f with respect to x (changed in place and restored)"""
    grad = np.zeros_like(x)
    flat, grad_flat = x.reshape(-1), grad.reshape(-1)
    for i in range(flat.size):
        old = flat[i]
        flat[i] = old + eps
        plus = f()
        flat[i] = old - eps
        minus = f()
        flat[i] = old
        grad_flat[i] = (plus - minus) / (2 * eps)
    return grad


@pytest.fixture(name="rng")
def fixture_rng() -> np.random.Generator:
    """Seeded generator"""
    return np.random.default_rng(1234)


@pytest.fixture(name="forward_eval")
def fixture_forward_eval():
    """Returns a function evaluating a network in eval mode"""
    def run(net: NetworkGraph, x: np.ndarray) -> np.ndarray:
        return net.forward(x, Mode.EVAL)
    return run
