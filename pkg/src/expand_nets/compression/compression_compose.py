"""Provides the algebraic collapse of expanded chains into single layers.

Composition runs in kernel space. For cross-correlation, stacking first (k1) and second (k2) gives
one kernel of size k1 + k2 - 1 with K[n, m] = sum_p fullconv(second[n, p], first[p, m]).
"""

import numpy as np

from expand_nets.expansion.expansion_types import ExpansionStrategy, ExpansionUnit
from expand_nets.network.network_conv2d import Conv2d
from expand_nets.network.network_linear import Linear
from expand_nets.utils.errors import CompressionError


def collapse_fc_chain(layers: list[Linear]) -> Linear:
    """Collapses a chain of linear layers into one, biases are allowed on every layer"""
    if not layers:
        raise CompressionError("Cannot collapse an empty chain")
    for i in range(len(layers) - 1):
        if layers[i].out_features != layers[i + 1].in_features:
            raise CompressionError(f"Linear chain shapes do not fit at position {i}: "
                                   f"{layers[i].out_features} -> {layers[i + 1].in_features}")

    weight = layers[0].weight.copy()
    bias = layers[0].bias.copy() if layers[0].has_bias else np.zeros(layers[0].out_features, dtype=weight.dtype)
    for layer in layers[1:]:
        weight = layer.weight @ weight
        bias = layer.weight @ bias
        if layer.has_bias:
            bias = bias + layer.bias

    has_bias = any(x.has_bias for x in layers)
    result = Linear(layers[0].in_features, layers[-1].out_features, has_bias, dtype=layers[0].dtype)
    result.weight[...] = weight
    if has_bias:
        result.bias[...] = bias
    return result


def compose_conv_pair(first: Conv2d, second: Conv2d) -> Conv2d:
    """Composes two convolutions into one with identical function.

    Exact only if the first layer has stride 1 (or the second is a pointwise 1x1 s1 p0 layer) and
    the second layer does not pad (or the first is a bias free 1x1 layer, which maps padding zeros
    to zeros).
    """
    if first.out_channels != second.in_channels:
        raise CompressionError(f"Channels do not fit: {first.out_channels} -> {second.in_channels}")
    if first.stride != 1 and not second.is_pointwise:
        raise CompressionError(f"First layer stride {first.stride} != 1 followed by a non pointwise layer "
                               f"cannot be composed exactly")
    if second.padding > 0 and not (first.kernel_size == 1 and not first.has_bias):
        reason = "bias of first layer would leak into padding" if first.kernel_size == 1 else \
            f"padding {second.padding} of second layer is not reproducible after a {first.kernel_size}x{first.kernel_size} kernel"
        raise CompressionError(f"Composition not exact: {reason}")

    k1, k2 = first.kernel_size, second.kernel_size
    kernel = np.zeros((second.out_channels, first.in_channels, k1 + k2 - 1, k1 + k2 - 1),
                      dtype=np.result_type(first.weight, second.weight))
    for a in range(k2):
        for b in range(k2):
            kernel[:, :, a:a + k1, b:b + k1] += np.tensordot(second.weight[:, :, a, b], first.weight, axes=([1], [0]))

    has_bias = first.has_bias or second.has_bias
    result = Conv2d(first.in_channels, second.out_channels, k1 + k2 - 1, stride=first.stride * second.stride,
                    padding=first.padding + second.padding, has_bias=has_bias, dtype=first.dtype)
    result.weight[...] = kernel
    if has_bias:
        bias = np.zeros(second.out_channels, dtype=kernel.dtype)
        if first.has_bias:
            bias += second.weight.sum(axis=(2, 3)) @ first.bias
        if second.has_bias:
            bias += second.bias
        result.bias[...] = bias
    return result


def _check_conv_placement(unit: ExpansionUnit, layers: list[Conv2d]):
    """Checks that layers have the stride/padding/bias placement the unit's strategy produces"""
    spec = unit.original_spec
    if len(layers) != unit.expected_length:
        raise CompressionError(f"{unit}: expected {unit.expected_length} layers, got {len(layers)}")
    for i, layer in enumerate(layers):
        last = i == len(layers) - 1
        if not isinstance(layer, Conv2d):
            raise CompressionError(f"{unit}: layer {i} is {layer.kind.label}, not conv2d")
        if layer.has_bias and not last:
            raise CompressionError(f"{unit}: only the last layer may carry a bias, layer {i} has one")
        expected_padding = spec["padding"] if i == 0 else 0
        if layer.padding != expected_padding:
            raise CompressionError(f"{unit}: layer {i} padding {layer.padding}, expected {expected_padding}")
        if unit.strategy == ExpansionStrategy.CL:
            expected_kernel = spec["kernel_size"] if i == 1 else 1
            expected_stride = spec["stride"] if i == 1 else 1
        else:
            expected_kernel = 3
            expected_stride = spec["stride"] if last else 1
        if layer.kernel_size != expected_kernel or layer.stride != expected_stride:
            raise CompressionError(f"{unit}: layer {i} is k={layer.kernel_size} s={layer.stride}, "
                                   f"expected k={expected_kernel} s={expected_stride}")


def collapse_conv_chain(unit: ExpansionUnit, layers: list[Conv2d]) -> Conv2d:
    """Collapses a CL or CK unit by a left fold of compose_conv_pair, result must match the original spec"""
    if unit.strategy not in (ExpansionStrategy.CL, ExpansionStrategy.CK):
        raise CompressionError(f"{unit}: not a convolution unit")
    _check_conv_placement(unit, layers)
    result = layers[0]
    for layer in layers[1:]:
        try:
            result = compose_conv_pair(result, layer)
        except CompressionError as e:
            raise CompressionError(f"{unit}: {e}") from e
    if result.describe() != unit.original_spec:
        raise CompressionError(f"{unit}: collapsed layer {result.describe()} does not match original")
    return result


def collapse_unit(unit: ExpansionUnit, layers: list) -> Conv2d | Linear:
    """Collapses any unit into its original layer"""
    if unit.strategy == ExpansionStrategy.FC:
        if not all(isinstance(x, Linear) for x in layers):
            raise CompressionError(f"{unit}: FC unit contains non linear layers")
        result = collapse_fc_chain(layers)
        if result.describe() != unit.original_spec:
            raise CompressionError(f"{unit}: collapsed layer {result.describe()} does not match original")
        return result
    return collapse_conv_chain(unit, layers)
