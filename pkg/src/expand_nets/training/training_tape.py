"""Provides reverse-mode gradients through a network with softmax cross-entropy loss"""

from dataclasses import dataclass, field

import numpy as np

from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_types import Mode
from expand_nets.utils.errors import ShapeError


@dataclass
class GradientTape:
    """Parameter gradients per layer (same names and shapes as layer params) and the loss they belong to"""
    loss: float = 0.0
    grads: list[dict[str, np.ndarray]] = field(default_factory=list)
    input_grad: np.ndarray | None = None


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Returns mean cross-entropy over the batch and its gradient with respect to logits"""
    n, classes = logits.shape
    if labels.shape != (n,):
        raise ShapeError(f"Labels shape {labels.shape} does not match batch of {n}")
    if labels.min() < 0 or labels.max() >= classes:
        raise ValueError(f"Labels must be in [0, {classes}), got range [{labels.min()}, {labels.max()}]")
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_sum = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_sum
    rows = np.arange(n)
    loss = -log_probs[rows, labels].mean()
    grad = np.exp(log_probs)
    grad[rows, labels] -= 1
    return float(loss), grad / n


def backward(net: NetworkGraph, x: np.ndarray, labels: np.ndarray) -> tuple[float, GradientTape]:
    """Forward in train mode, then back propagates the mean cross-entropy loss through every layer"""
    logits, caches = net.forward_with_caches(x, Mode.TRAIN)
    if logits.ndim == 4:
        logits = logits.reshape(logits.shape[0], -1)
    loss, grad = softmax_cross_entropy(logits, labels)

    grads: list[dict[str, np.ndarray]] = [{} for _ in net.layers]
    for i in reversed(range(len(net.layers))):
        grad, grads[i] = net.layers[i].backward(grad, caches[i])
    return loss, GradientTape(loss, grads, grad)
