"""Provides the explicit matrix form of a convolution, only meant as verification oracle for small sizes"""

import numpy as np

from expand_nets.network.network_conv2d import Conv2d
from expand_nets.tensor.tensor_ops import conv2d_output_size
from expand_nets.tensor.tensor_types import Matrix


MAX_MATRIX_SIDE = 4096


def build_conv_matrix(layer: Conv2d, input_hw: tuple[int, int]) -> Matrix:
    """Returns matrix A with vec(conv(x)) = A vec(x) (bias excluded).

    vec flattens (c, h, w) row-major; zero padding is folded in by dropping taps outside the input.
    """
    h, w = input_hw
    k, s, p = layer.kernel_size, layer.stride, layer.padding
    out_h, out_w = conv2d_output_size(h, k, s, p), conv2d_output_size(w, k, s, p)
    rows_count = layer.out_channels * out_h * out_w
    cols_count = layer.in_channels * h * w
    if max(rows_count, cols_count) > MAX_MATRIX_SIDE:
        raise ValueError(f"Conv matrix {rows_count}x{cols_count} exceeds size guard {MAX_MATRIX_SIDE}")
    if out_h < 1 or out_w < 1:
        raise ValueError(f"Non-positive output size {out_h}x{out_w} for input {h}x{w}")

    result = np.zeros((rows_count, cols_count), dtype=layer.weight.dtype)
    out_channel_offsets = np.arange(layer.out_channels) * out_h * out_w
    in_channel_offsets = np.arange(layer.in_channels) * h * w
    for oy in range(out_h):
        for ox in range(out_w):
            rows = out_channel_offsets + oy * out_w + ox
            for i in range(k):
                y = oy * s + i - p
                if not 0 <= y < h:
                    continue
                for j in range(k):
                    x = ox * s + j - p
                    if 0 <= x < w:
                        result[np.ix_(rows, in_channel_offsets + y * w + x)] += layer.weight[:, :, i, j]
    return result
