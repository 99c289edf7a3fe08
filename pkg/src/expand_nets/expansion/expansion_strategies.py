"""Provides the three expansion strategies FC, CL and CK.

Channel rule for expansion rate r: the first expanded layer outputs P1 = rM channels, all further
hidden layers Pi = rN. Only the last layer of a unit carries a bias (if the original layer has one),
earlier biases on a padded layer would leak into the zero padding and break exact compression.
"""

import numpy as np

from expand_nets.network.network_conv2d import Conv2d
from expand_nets.network.network_linear import Linear
from expand_nets.utils.errors import ExpansionError


def _hidden_widths(in_width: int, out_width: int, rate: int, hidden_count: int, keep_input_width: bool) -> list[int]:
    """Returns [M, P1, ..., N] for hidden_count hidden layers"""
    first = in_width if keep_input_width else rate * in_width
    hidden = [first] + [rate * out_width] * (hidden_count - 1)
    return [in_width] + hidden + [out_width]


def _initialize(layers: list, rng: np.random.Generator | None):
    if rng is not None:
        for x in layers:
            x.initialize(rng)


def expand_fc(layer: Linear, rate: int, depth: int = 3, rng: np.random.Generator | None = None) -> list[Linear]:
    """Expands Linear(M, N) into depth Linear layers M -> rM -> rN ... -> rN -> N"""
    if depth < 2:
        raise ExpansionError(f"FC expansion depth must be >= 2, got {depth}")
    if rate < 1:
        raise ExpansionError(f"Expansion rate must be >= 1, got {rate}")
    widths = _hidden_widths(layer.in_features, layer.out_features, rate, depth - 1, False)
    result = [Linear(widths[i], widths[i + 1], has_bias=layer.has_bias and i == depth - 1, dtype=layer.dtype)
              for i in range(depth)]
    _initialize(result, rng)
    return result


def expand_cl(layer: Conv2d, rate: int, keep_input_channels: bool = False,
              rng: np.random.Generator | None = None) -> list[Conv2d]:
    """Expands a k x k convolution into 1x1 (M -> rM, padding p), k x k (rM -> rN, stride s) and 1x1 (rN -> N)"""
    if rate < 1:
        raise ExpansionError(f"Expansion rate must be >= 1, got {rate}")
    m, n = layer.in_channels, layer.out_channels
    p = m if keep_input_channels else rate * m
    q = rate * n
    result = [
        Conv2d(m, p, 1, stride=1, padding=layer.padding, has_bias=False, dtype=layer.dtype),
        Conv2d(p, q, layer.kernel_size, stride=layer.stride, padding=0, has_bias=False, dtype=layer.dtype),
        Conv2d(q, n, 1, stride=1, padding=0, has_bias=layer.has_bias, dtype=layer.dtype),
    ]
    _initialize(result, rng)
    return result


def ck_depth(kernel_size: int) -> int:
    """Number of 3x3 layers replacing a k x k kernel"""
    if kernel_size <= 3 or kernel_size % 2 == 0:
        raise ExpansionError(f"CK expansion needs an odd kernel size > 3, got {kernel_size}")
    return (kernel_size - 1) // 2


def expand_ck(layer: Conv2d, rate: int, keep_input_channels: bool = False,
              rng: np.random.Generator | None = None) -> list[Conv2d]:
    """Expands a k x k convolution into (k - 1) / 2 3x3 convolutions, padding on the first, stride on the last"""
    depth = ck_depth(layer.kernel_size)
    if rate < 1:
        raise ExpansionError(f"Expansion rate must be >= 1, got {rate}")
    widths = _hidden_widths(layer.in_channels, layer.out_channels, rate, depth - 1, keep_input_channels)
    result = []
    for i in range(depth):
        last = i == depth - 1
        result.append(Conv2d(widths[i], widths[i + 1], 3,
                             stride=layer.stride if last else 1,
                             padding=layer.padding if i == 0 else 0,
                             has_bias=layer.has_bias and last, dtype=layer.dtype))
    _initialize(result, rng)
    return result
