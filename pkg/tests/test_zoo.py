"""Tests for the SmallNet builders"""

import itertools

import numpy as np
import pytest

from expand_nets.network.network_conv2d import Conv2d
from expand_nets.network.network_linear import Linear
from expand_nets.utils.errors import ExpansionError
from expand_nets.zoo.zoo_smallnet import CLASS_COUNTS, CONV_DEPTHS, KERNEL_SIZES, SmallNetId, build_expandnet_variant, build_from_id, build_smallnet


def _convs(net):
    return [x for x in net.layers if isinstance(x, Conv2d)]


def test_smallnet7_matches_reference_table():
    net = build_smallnet(7, 10)
    assert [x.kind.label for x in net.layers] == ["conv2d", "batch_norm", "relu", "max_pool"] * 3 + \
        ["flatten", "linear", "relu", "linear"]
    assert [(x.in_channels, x.out_channels, x.kernel_size, x.stride, x.padding) for x in _convs(net)] == \
        [(3, 8, 7, 1, 3), (8, 16, 7, 1, 3), (16, 32, 7, 1, 3)]
    linears = [x for x in net.layers if isinstance(x, Linear)]
    assert [(x.in_features, x.out_features) for x in linears] == [(512, 64), (64, 10)]


def test_smallnet3_has_no_padding():
    net = build_smallnet(3, 10)
    assert all(x.padding == 0 for x in _convs(net))
    assert [x for x in net.layers if isinstance(x, Linear)][0].in_features == 128


def test_four_conv_variant():
    net = build_smallnet(5, 100, 4)
    assert [x.out_channels for x in _convs(net)] == [8, 16, 32, 64]
    assert all(x.padding == 2 for x in _convs(net))
    assert [x for x in net.layers if isinstance(x, Linear)][0].in_features == 256
    assert net.num_classes == 100


@pytest.mark.parametrize("k, classes, depth", itertools.product(KERNEL_SIZES, CLASS_COUNTS, CONV_DEPTHS))
def test_every_smallnet_evaluates(k, classes, depth):
    net = build_smallnet(k, classes, depth)
    assert net.forward(np.zeros((2, 3, 32, 32), dtype=np.float32)).shape == (2, classes)


def test_invalid_configurations():
    with pytest.raises(ValueError):
        build_smallnet(4, 10)
    with pytest.raises(ValueError):
        build_smallnet(7, 20)
    with pytest.raises(ValueError):
        build_smallnet(7, 10, 5)


def test_architecture_ids():
    assert SmallNetId.parse("smallnet7") == SmallNetId(7, 3, 10)
    assert SmallNetId.parse("smallnet5-4conv-c100") == SmallNetId(5, 4, 100)
    assert SmallNetId(9, 4, 10).label == "smallnet9-4conv-c10"
    assert build_from_id("smallnet7-3conv-c10").name == "smallnet7-3conv-c10"
    with pytest.raises(ValueError):
        SmallNetId.parse("resnet18")


def test_variants():
    base = build_smallnet(7, 10)
    fc_only = build_expandnet_variant(base, "FC", 2)
    assert len(fc_only.units) == 1
    assert fc_only.units[0].original_spec == base.layers[13].describe()

    literal = build_expandnet_variant(base, "CK+FC", 4, keep_input_channels=True)
    first_unit = literal.layers[literal.units[0].start:literal.units[0].stop]
    assert [(x.in_channels, x.out_channels) for x in first_unit] == [(3, 3), (3, 32), (32, 8)]

    with pytest.raises(ExpansionError):
        build_expandnet_variant(build_smallnet(3, 10), "CK", 4)
    with pytest.raises(ExpansionError):
        build_expandnet_variant(base, "FC+XY", 4)


def test_builder_is_seeded():
    a, b, c = build_smallnet(7, 10, seed=1), build_smallnet(7, 10, seed=1), build_smallnet(7, 10, seed=2)
    assert np.array_equal(a.layers[0].weight, b.layers[0].weight)
    assert not np.array_equal(a.layers[0].weight, c.layers[0].weight)
