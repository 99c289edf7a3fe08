"""Provides the numerical kernels: convolution, matrix multiply and max pooling, forward and backward.

All kernels are deterministic: reductions run through numpy tensordot with fixed axes, the
col2im scatter runs in a fixed (i, j) loop order.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from expand_nets.utils.errors import ShapeError
from .tensor_types import ConvKernel, Matrix, Tensor4, Vector, check_conv_kernel, check_matrix, check_tensor4


def conv2d_output_size(size: int, kernel_size: int, stride: int, padding: int) -> int:
    """Returns spatial output size of a convolution or pooling"""
    return (size + 2 * padding - kernel_size) // stride + 1


def _windows(x: Tensor4, kernel_size: int, stride: int) -> np.ndarray:
    """Returns strided view (n, c, oh, ow, k, k) of all kernel windows"""
    return sliding_window_view(x, (kernel_size, kernel_size), axis=(2, 3))[:, :, ::stride, ::stride]


def _pad(x: Tensor4, padding: int) -> Tensor4:
    if padding == 0:
        return x
    return np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))


def _check_conv_args(x: Tensor4, kernel: ConvKernel, bias: Vector | None, stride: int, padding: int) -> tuple[int, int]:
    check_tensor4(x)
    check_conv_kernel(kernel)
    if stride < 1:
        raise ShapeError(f"Stride must be positive, got {stride}")
    if padding < 0:
        raise ShapeError(f"Padding must not be negative, got {padding}")
    if x.shape[1] != kernel.shape[1]:
        raise ShapeError(f"Input has {x.shape[1]} channels, kernel expects {kernel.shape[1]}")
    if bias is not None and bias.shape != (kernel.shape[0],):
        raise ShapeError(f"Bias shape {bias.shape} does not match {kernel.shape[0]} output channels")
    k = kernel.shape[2]
    out_h = conv2d_output_size(x.shape[2], k, stride, padding)
    out_w = conv2d_output_size(x.shape[3], k, stride, padding)
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"Non-positive output size {out_h}x{out_w} for input {x.shape[2]}x{x.shape[3]}, "
                         f"k={k}, s={stride}, p={padding}")
    return out_h, out_w


def conv2d_forward(x: Tensor4, kernel: ConvKernel, bias: Vector | None = None, stride: int = 1, padding: int = 0) -> Tensor4:
    """Cross-correlation of x with kernel, zero padding, optional per output channel bias"""
    _check_conv_args(x, kernel, bias, stride, padding)
    windows = _windows(_pad(x, padding), kernel.shape[2], stride)
    # (n, oh, ow, N)
    y = np.tensordot(windows, kernel, axes=([1, 4, 5], [1, 2, 3]))
    y = np.ascontiguousarray(y.transpose(0, 3, 1, 2))
    if bias is not None:
        y += bias.reshape(1, -1, 1, 1)
    return y


def conv2d_backward(grad_y: Tensor4, x: Tensor4, kernel: ConvKernel, stride: int, padding: int,
                    with_bias: bool) -> tuple[Tensor4, ConvKernel, Vector | None]:
    """Returns gradients with respect to input, kernel and (optional) bias"""
    k = kernel.shape[2]
    xp = _pad(x, padding)
    windows = _windows(xp, k, stride)
    out_h, out_w = grad_y.shape[2], grad_y.shape[3]

    grad_kernel = np.tensordot(grad_y, windows, axes=([0, 2, 3], [0, 2, 3]))
    grad_bias = grad_y.sum(axis=(0, 2, 3)) if with_bias else None

    # (n, oh, ow, M, k, k)
    grad_windows = np.tensordot(grad_y, kernel, axes=([1], [0])).transpose(0, 3, 1, 2, 4, 5)
    grad_xp = np.zeros_like(xp)
    for i in range(k):
        for j in range(k):
            grad_xp[:, :, i:i + stride * out_h:stride, j:j + stride * out_w:stride] += grad_windows[..., i, j]
    if padding > 0:
        grad_xp = grad_xp[:, :, padding:-padding, padding:-padding]
    return np.ascontiguousarray(grad_xp), grad_kernel, grad_bias


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Standard matrix product"""
    check_matrix(a, "left matrix")
    check_matrix(b, "right matrix")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"Matrix dimensions do not match {a.shape} x {b.shape}")
    return a @ b


def maxpool2d(x: Tensor4, kernel_size: int, stride: int) -> tuple[Tensor4, np.ndarray]:
    """Returns window maxima and argmax as linear index into each (h, w) input plane,
    ties break to the lowest linear index"""
    check_tensor4(x)
    n, c, h, w = x.shape
    if h < kernel_size or w < kernel_size:
        raise ShapeError(f"Max pool window {kernel_size} larger than input {h}x{w}")
    windows = _windows(x, kernel_size, stride)
    out_h, out_w = windows.shape[2], windows.shape[3]
    flat = windows.reshape(n, c, out_h, out_w, kernel_size * kernel_size)
    # np.argmax returns the first occurrence, windows are flattened row-major
    local = flat.argmax(axis=-1)
    y = np.take_along_axis(flat, local[..., None], axis=-1)[..., 0]
    rows = np.arange(out_h).reshape(-1, 1) * stride + local // kernel_size
    cols = np.arange(out_w).reshape(1, -1) * stride + local % kernel_size
    return np.ascontiguousarray(y), rows * w + cols


def maxpool2d_backward(grad_y: Tensor4, argmax: np.ndarray, input_shape: tuple[int, int, int, int]) -> Tensor4:
    """Routes gradients to the stored argmax positions"""
    n, c, h, w = input_shape
    grad_x = np.zeros((n * c, h * w), dtype=grad_y.dtype)
    rows = np.arange(n * c).reshape(-1, 1)
    np.add.at(grad_x, (rows, argmax.reshape(n * c, -1)), grad_y.reshape(n * c, -1))
    return grad_x.reshape(input_shape)
