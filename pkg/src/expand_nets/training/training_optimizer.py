"""Provides SGD with momentum, weight decay and milestone learning rate decay"""

import numpy as np

from expand_nets.network.network_graph import NetworkGraph
from .training_tape import GradientTape
from .training_types import TrainConfig


class SgdOptimizer():
    """SGD: v <- momentum * v + grad + weight_decay * w, w <- w - lr(epoch) * v.
    Weight decay only applies to conv and linear weights, never to biases or batch norm parameters."""


    def __init__(self, net: NetworkGraph, cfg: TrainConfig):
        self._net = net
        self._cfg = cfg
        self._velocity: dict[tuple[int, str], np.ndarray] = {}


    @property
    def config(self) -> TrainConfig:
        """Getter for config"""
        return self._cfg


    def step(self, tape: GradientTape, epoch: int):
        """Applies one update with the gradients of tape"""
        lr = self._cfg.lr_at(epoch)
        for i, layer in enumerate(self._net.layers):
            decayed = layer.decayed_param_names()
            for name, param in layer.params.items():
                grad = tape.grads[i][name]
                if name in decayed and self._cfg.weight_decay != 0:
                    grad = grad + self._cfg.weight_decay * param
                key = i, name
                velocity = self._velocity.get(key)
                velocity = grad.astype(param.dtype) if velocity is None else self._cfg.momentum * velocity + grad
                self._velocity[key] = velocity
                param -= (lr * velocity).astype(param.dtype)


def sgd_step(net: NetworkGraph, tape: GradientTape, cfg: TrainConfig, epoch: int, optimizer: SgdOptimizer | None = None) -> SgdOptimizer:
    """Applies one SGD step and returns the optimizer holding the momentum state for the next call"""
    if optimizer is None:
        optimizer = SgdOptimizer(net, cfg)
    optimizer.step(tape, epoch)
    return optimizer
