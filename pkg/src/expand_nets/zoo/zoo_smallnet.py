"""Provides the SmallNet architectures and their ExpandNet variants.

SmallNet: 3 convolutions with 8, 16 and 32 channels, each followed by BatchNorm, ReLU and 2x2 max
pooling, then Fc1 with 64 units, ReLU and the logit layer Fc2. The 4-conv ablation variant adds a
convolution with 64 channels and always uses size preserving padding. The original 3x3 3-conv net
uses no padding, other kernel sizes pad (k - 1) / 2.
"""

import re
from dataclasses import dataclass

import numpy as np

from expand_nets.expansion.expansion_network import expand_network, plan_for_variant
from expand_nets.network.network_activation import ReLU
from expand_nets.network.network_batch_norm import BatchNorm
from expand_nets.network.network_conv2d import Conv2d
from expand_nets.network.network_flatten import Flatten
from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_layer import Layer
from expand_nets.network.network_linear import Linear
from expand_nets.network.network_max_pool import MaxPool
from expand_nets.utils.errors import ExpansionError


KERNEL_SIZES = (3, 5, 7, 9)
CONV_DEPTHS = (3, 4)
CLASS_COUNTS = (10, 100)
VARIANTS = ("FC", "CL", "CL+FC", "CK", "CK+FC")
FC1_UNITS = 64
INPUT_SHAPE = (3, 32, 32)

_ARCH_PATTERN = re.compile(r"^smallnet(\d+)(?:-(\d)conv)?(?:-c(\d+))?$")


@dataclass(frozen=True)
class SmallNetId:
    """Architecture id like smallnet7-3conv-c10"""
    kernel_size: int = 7
    depth: int = 3
    num_classes: int = 10


    @property
    def label(self) -> str:
        """Getter for string id"""
        return f"smallnet{self.kernel_size}-{self.depth}conv-c{self.num_classes}"


    @staticmethod
    def parse(text: str) -> "SmallNetId":
        """Parses ids, conv depth and class count are optional (3conv, c10)"""
        match = _ARCH_PATTERN.match(text.strip().lower())
        if match is None:
            raise ValueError(f"Unknown architecture id {text}")
        kernel_size, depth, num_classes = match.groups()
        return SmallNetId(int(kernel_size), int(depth or 3), int(num_classes or 10))


def build_smallnet(kernel_size: int = 7, num_classes: int = 10, depth: int = 3, seed: int = 0,
                   dtype: np.dtype = np.float32) -> NetworkGraph:
    """Builds a freshly initialized SmallNet for 3x32x32 inputs"""
    if kernel_size not in KERNEL_SIZES or num_classes not in CLASS_COUNTS or depth not in CONV_DEPTHS:
        raise ValueError(f"Invalid SmallNet configuration k={kernel_size} classes={num_classes} depth={depth}")
    padding = 0 if (kernel_size == 3 and depth == 3) else (kernel_size - 1) // 2
    channels = [8, 16, 32, 64][:depth]

    layers: list[Layer] = []
    in_channels, size = INPUT_SHAPE[0], INPUT_SHAPE[1]
    for out_channels in channels:
        layers += [Conv2d(in_channels, out_channels, kernel_size, 1, padding, dtype=dtype),
                   BatchNorm(out_channels, dtype=dtype), ReLU(dtype=dtype), MaxPool(2, 2, dtype=dtype)]
        size = (size + 2 * padding - kernel_size + 1) // 2
        in_channels = out_channels
    layers += [Flatten(dtype=dtype), Linear(in_channels * size * size, FC1_UNITS, dtype=dtype), ReLU(dtype=dtype),
               Linear(FC1_UNITS, num_classes, dtype=dtype)]

    net = NetworkGraph(SmallNetId(kernel_size, depth, num_classes).label, INPUT_SHAPE, num_classes, layers)
    net.initialize(seed)
    return net


def build_from_id(arch_id: str, seed: int = 0, dtype: np.dtype = np.float32) -> NetworkGraph:
    """Builds a SmallNet from its string id"""
    parsed = SmallNetId.parse(arch_id)
    return build_smallnet(parsed.kernel_size, parsed.num_classes, parsed.depth, seed, dtype)


def build_expandnet_variant(base: NetworkGraph, variant: str, rate: int = 4, depth: int = 3,
                            keep_input_channels: bool = False, seed: int = 0) -> NetworkGraph:
    """Expands base with a variant from FC, CL, CL+FC, CK, CK+FC"""
    if variant.upper() not in VARIANTS:
        raise ExpansionError(f"Unknown variant {variant}, expected one of {', '.join(VARIANTS)}")
    plan = plan_for_variant(base, variant.upper(), rate, depth, keep_input_channels, seed)
    return expand_network(base, plan)
