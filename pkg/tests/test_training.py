"""Tests for gradients, the SGD optimizer and the training loop"""

from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from expand_nets.compression.compression_network import compress_network
from expand_nets.data.data_synthetic import synthetic_dataset, synthetic_split
from expand_nets.data.data_types import DatasetHandle, DatasetSplit, NormalizationStats
from expand_nets.expansion.expansion_network import build_nonlinear_counterpart
from expand_nets.network.network_activation import LeakyReLU, ReLU
from expand_nets.network.network_batch_norm import BatchNorm
from expand_nets.network.network_conv2d import Conv2d
from expand_nets.network.network_flatten import Flatten
from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_linear import Linear
from expand_nets.network.network_max_pool import MaxPool
from expand_nets.network.network_types import Mode
from expand_nets.tensor.tensor_types import TensorDType
from expand_nets.training.training_augment import augment_batch
from expand_nets.training.training_experiment import VariantResult, VariantSpec, run_variant, summarize_results
from expand_nets.training.training_optimizer import sgd_step
from expand_nets.training.training_tape import GradientTape, backward, softmax_cross_entropy
from expand_nets.training.training_trainer import evaluate, init_from_counterpart, train
from expand_nets.training.training_types import TrainConfig, TrainReport
from expand_nets.utils.errors import ExpansionError, ShapeError
from expand_nets.zoo.zoo_smallnet import build_expandnet_variant, build_smallnet


def _mixed_net() -> NetworkGraph:
    dtype = np.float64
    layers = [Conv2d(2, 3, 3, 1, 1, dtype=dtype), BatchNorm(3, dtype=dtype), ReLU(dtype=dtype),
              MaxPool(2, 2, dtype=dtype), Conv2d(3, 4, 3, 2, 1, has_bias=False, dtype=dtype),
              LeakyReLU(0.1, dtype=dtype), Flatten(dtype=dtype), Linear(16, 6, dtype=dtype),
              BatchNorm(6, dtype=dtype), Linear(6, 3, dtype=dtype)]
    net = NetworkGraph("mixed", (2, 8, 8), 3, layers)
    net.initialize(11)
    for layer in net.layers:
        for param in layer.params.values():
            param += np.random.default_rng(param.size).normal(0, 0.1, param.shape)
    return net


def _train_loss(net: NetworkGraph, x: np.ndarray, labels: np.ndarray) -> float:
    logits = net.forward(x, Mode.TRAIN)
    return softmax_cross_entropy(logits, labels)[0]


def _tiny_classifier(dtype=np.float32, seed=0) -> NetworkGraph:
    layers = [Conv2d(3, 4, 3, 2, 1, dtype=dtype), BatchNorm(4, dtype=dtype), ReLU(dtype=dtype),
              MaxPool(2, 2, dtype=dtype), Flatten(dtype=dtype), Linear(4 * 8 * 8, 4, dtype=dtype)]
    net = NetworkGraph("tiny", (3, 32, 32), 4, layers)
    net.initialize(seed)
    return net


def test_uniform_logits_loss_is_log_classes():
    loss, grad = softmax_cross_entropy(np.zeros((4, 10)), np.array([0, 3, 5, 9]))
    assert loss == pytest.approx(np.log(10))
    assert_allclose(grad.sum(axis=1), 0, atol=1e-12)


def test_label_out_of_range():
    with pytest.raises(ValueError):
        softmax_cross_entropy(np.zeros((2, 3)), np.array([0, 3]))


def test_linear_gradient_matches_finite_differences(rng):
    layer = Linear(4, 2, dtype=np.float64)
    layer.initialize(rng)
    net = NetworkGraph("linear", (4,), 2, [layer])
    x, labels = rng.normal(size=(6, 4)), np.array([0, 1, 1, 0, 1, 0])
    _, tape = backward(net, x, labels)
    h = 1e-5
    for name, param in layer.params.items():
        numeric = np.zeros_like(param)
        for index in np.ndindex(param.shape):
            old = param[index]
            param[index] = old + h
            plus = _train_loss(net, x, labels)
            param[index] = old - h
            minus = _train_loss(net, x, labels)
            param[index] = old
            numeric[index] = (plus - minus) / (2 * h)
        assert tape.grads[0][name].shape == param.shape
        assert np.abs(tape.grads[0][name] - numeric).max() / max(np.abs(numeric).max(), 1e-12) <= 1e-4


def test_network_gradients_match_finite_differences(rng):
    net = _mixed_net()
    x, labels = rng.normal(size=(5, 2, 8, 8)), np.array([0, 1, 2, 1, 0])
    loss, tape = backward(net, x, labels)
    assert loss == pytest.approx(_train_loss(net, x, labels))
    h = 1e-5
    for i, layer in enumerate(net.layers):
        for name, param in layer.params.items():
            for flat in rng.choice(param.size, size=min(5, param.size), replace=False):
                index = np.unravel_index(flat, param.shape)
                old = param[index]
                param[index] = old + h
                plus = _train_loss(net, x, labels)
                param[index] = old - h
                minus = _train_loss(net, x, labels)
                param[index] = old
                numeric = (plus - minus) / (2 * h)
                analytic = tape.grads[i][name][index]
                assert abs(analytic - numeric) <= 1e-4 * max(abs(numeric), abs(analytic), 1e-3), (i, name)


def test_duplicated_sample_doubles_contribution(rng):
    layer = Linear(3, 4, dtype=np.float64)
    layer.initialize(rng)
    net = NetworkGraph("linear", (3,), 4, [layer])
    a, b = rng.normal(size=(2, 1, 3))
    _, single_a = backward(net, a, np.array([1]))
    _, single_b = backward(net, b, np.array([2]))
    _, batch = backward(net, np.concatenate([a, a, b]), np.array([1, 1, 2]))
    assert_allclose(3 * batch.grads[0]["weight"], 2 * single_a.grads[0]["weight"] + single_b.grads[0]["weight"])


def _constant_tape(net: NetworkGraph, value: float) -> GradientTape:
    return GradientTape(0.0, [{name: np.full_like(p, value) for name, p in layer.params.items()} for layer in net.layers])


def test_sgd_plain_step():
    layer = Linear(3, 2, dtype=np.float64)
    layer.weight[...] = 1.0
    net = NetworkGraph("l", (3,), 2, [layer])
    cfg = TrainConfig(epochs=1, lr=0.1, momentum=0.0, lr_milestones=())
    sgd_step(net, _constant_tape(net, 2.0), cfg, 0)
    assert_allclose(layer.weight, 1.0 - 0.1 * 2.0)


def test_sgd_momentum_recurrence():
    layer = Linear(3, 2, dtype=np.float64)
    net = NetworkGraph("l", (3,), 2, [layer])
    cfg = TrainConfig(epochs=1, lr=0.1, momentum=0.9, lr_milestones=())
    tape = _constant_tape(net, 1.0)
    optimizer = sgd_step(net, tape, cfg, 0)
    sgd_step(net, tape, cfg, 0, optimizer)
    assert_allclose(layer.weight, -0.1 * (1.0 + 1.9))
    assert_allclose(layer.bias, -0.1 * (1.0 + 1.9))


def test_weight_decay_skips_biases_and_batch_norm():
    linear, bn = Linear(2, 2, dtype=np.float64), BatchNorm(2, dtype=np.float64)
    linear.weight[...] = 1.0
    linear.bias[...] = 1.0
    net = NetworkGraph("decay", (2,), 2, [linear, bn])
    cfg = TrainConfig(epochs=1, lr=0.1, momentum=0.0, weight_decay=0.5, lr_milestones=())
    sgd_step(net, _constant_tape(net, 0.0), cfg, 0)
    assert_allclose(linear.weight, 1.0 - 0.1 * 0.5)
    assert_array_equal(linear.bias, 1.0)
    assert_array_equal(bn.params["scale"], 1.0)
    assert_array_equal(bn.params["shift"], 0.0)


def test_learning_rate_schedule():
    cfg = TrainConfig.cifar_protocol()
    assert (cfg.epochs, cfg.batch_size, cfg.momentum, cfg.lr) == (150, 128, 0.9, 0.01)
    assert cfg.lr_at(49) == pytest.approx(0.01)
    assert cfg.lr_at(50) == pytest.approx(0.001)
    assert cfg.lr_at(100) == pytest.approx(0.0001)
    assert TrainConfig.ablation_protocol().weight_decay == 0.0005


@pytest.mark.parametrize("milestones", [(50, 50), (100, 50), (150,)])
def test_invalid_milestones(milestones):
    with pytest.raises(ValueError):
        TrainConfig(lr_milestones=milestones)


def test_training_decreases_loss():
    data = synthetic_dataset(4, 8, seed=2)
    cfg = TrainConfig(epochs=10, batch_size=8, lr=0.01, lr_milestones=(), augment=False)
    report = train(_tiny_classifier(), data, cfg)
    assert len(report.records) == 10
    assert report.losses[-1] < report.losses[0]


def test_training_is_deterministic():
    train_data, eval_data = synthetic_split(4, 24, 8, seed=1)
    cfg = TrainConfig(epochs=2, batch_size=8, lr=0.01, lr_milestones=(1,), seed=4)
    first, second = _tiny_classifier(), _tiny_classifier()
    report_a = train(first, train_data, cfg, eval_data)
    report_b = train(second, train_data, cfg, eval_data)
    assert report_a.deterministic_view() == report_b.deterministic_view()
    for a, b in zip(first.layers, second.layers):
        for name in a.params:
            assert_array_equal(a.params[name], b.params[name])
    assert report_a.records[1].lr == pytest.approx(0.001)
    assert report_a.final_accuracy is not None

    other = train(_tiny_classifier(), train_data, replace(cfg, seed=5), eval_data)
    assert other.deterministic_view() != report_a.deterministic_view()


def test_train_errors():
    stats = NormalizationStats((0.0,) * 3, (1.0,) * 3)
    empty = DatasetHandle("empty", DatasetSplit.TRAIN, np.zeros((0, 3, 32, 32), np.float32),
                          np.zeros(0, np.int64), 4, stats)
    with pytest.raises(ValueError):
        train(_tiny_classifier(), empty, TrainConfig(epochs=1, lr_milestones=()))
    with pytest.raises(ValueError):
        train(_tiny_classifier(np.float64), synthetic_dataset(4, 8, 0), TrainConfig(epochs=1, lr_milestones=()))
    assert TrainConfig(dtype=TensorDType.FLOAT64, epochs=1, lr_milestones=()).to_dict()["dtype"] == "float64"


def test_train_rejects_epochs_without_usable_batch():
    net = _tiny_classifier()
    before = [x.copy() for layer in net.layers for _, x in layer.state_arrays()]
    with pytest.raises(ValueError, match="at least two samples"):
        train(net, synthetic_dataset(4, 8, 0), TrainConfig(epochs=1, batch_size=1, lr_milestones=()))
    after = [x for layer in net.layers for _, x in layer.state_arrays()]
    assert all(np.array_equal(a, b) for a, b in zip(before, after))


def test_report_jsonl_round_trip():
    report = train(_tiny_classifier(), synthetic_dataset(4, 8, 0), TrainConfig(epochs=2, batch_size=4, lr_milestones=()))
    text = report.to_jsonl()
    assert text.splitlines()[0].startswith('{"run"')
    restored = TrainReport.from_jsonl(text)
    assert restored.deterministic_view() == report.deterministic_view()
    assert restored.run["config"]["epochs"] == 2
    assert restored.run["augmentation"] != "none"


def test_smallnet_learns_easy_blobs():
    train_data, eval_data = synthetic_split(10, 300, 100, seed=0, noise=0.3)
    net = build_smallnet(7, 10, seed=0)
    train(net, train_data, TrainConfig(epochs=5, batch_size=16, lr=0.02, lr_milestones=(), augment=False))
    assert evaluate(net, eval_data) > 0.9


def test_init_from_counterpart():
    expanded = build_expandnet_variant(build_smallnet(7, 10), "CL+FC", 2, seed=1)
    counterpart = build_nonlinear_counterpart(expanded)
    counterpart.initialize(9)
    init_from_counterpart(expanded, counterpart)
    targets = [x for x in expanded.layers if x.has_params]
    sources = [x for x in counterpart.layers if x.has_params]
    assert len(targets) == len(sources)
    for target, source in zip(targets, sources):
        for (name, value), (_, expected) in zip(target.state_arrays(), source.state_arrays()):
            assert_array_equal(value, expected, err_msg=name)

    before = [[x.copy() for _, x in layer.state_arrays()] for layer in expanded.layers]
    init_from_counterpart(expanded, counterpart)
    for layer, saved in zip(expanded.layers, before):
        for (_, value), expected in zip(layer.state_arrays(), saved):
            assert_array_equal(value, expected)
    assert compress_network(expanded).describe() == build_smallnet(7, 10).describe()

    with pytest.raises(ShapeError):
        init_from_counterpart(expanded, build_nonlinear_counterpart(build_expandnet_variant(build_smallnet(7, 10), "CL", 2)))


def test_augment_batch(rng):
    images = rng.normal(size=(6, 3, 8, 8)).astype(np.float32)
    flipped_or_not = augment_batch(images, np.random.default_rng(0), pad=0)
    for original, result in zip(images, flipped_or_not):
        assert np.array_equal(result, original) or np.array_equal(result, original[..., ::-1])
    padded = augment_batch(images, np.random.default_rng(1))
    assert padded.shape == images.shape
    assert_array_equal(padded, augment_batch(images, np.random.default_rng(1)))


@pytest.mark.parametrize("text, expansion, init, label", [
    ("SmallNet", None, False, "SmallNet"),
    ("ck", "CK", False, "CK"),
    ("CL+FC+Init", "CL+FC", True, "CL+FC+Init"),
    (" cl + init ", "CL", True, "CL+Init"),
])
def test_variant_labels(text, expansion, init, label):
    spec = VariantSpec.parse(text)
    assert (spec.expansion, spec.init_from_counterpart, spec.label) == (expansion, init, label)


@pytest.mark.parametrize("text", ["", "Init", "SmallNet+Init", "CL+CK", "XL"])
def test_invalid_variant_labels(text):
    with pytest.raises(ExpansionError):
        VariantSpec.parse(text)


def test_run_variant_compact_and_counterpart_initialized(tmp_path):
    train_data, eval_data = synthetic_split(10, 40, 20, seed=0)
    cfg = TrainConfig(epochs=1, batch_size=8, lr_milestones=(), augment=False)

    compact = run_variant(build_smallnet(3, 10, seed=0), VariantSpec.parse("SmallNet"), train_data, eval_data, cfg)
    assert compact.variant == "SmallNet" and compact.agreement is None and compact.counterpart_accuracy is None
    assert 0.0 <= compact.accuracy <= 1.0 and len(compact.curve) == 1

    initialized = run_variant(build_smallnet(3, 10, seed=0), VariantSpec.parse("CL+Init"), train_data, eval_data,
                              cfg, rate=2, report_dir=tmp_path)
    assert initialized.agreement == 1.0
    assert initialized.counterpart_accuracy is not None
    report = TrainReport.from_jsonl((tmp_path / "CL+Init-seed0.jsonl").read_text())
    assert report.run["variant"] == "CL+Init" and report.run["init_from_counterpart"] is True
    assert (tmp_path / "CL+Init-seed0.counterpart.jsonl").is_file()

    summary = summarize_results([compact, initialized, VariantResult("SmallNet", 1, compact.accuracy + 0.5)])
    assert list(summary) == ["SmallNet", "CL+Init"]
    assert summary["SmallNet"]["runs"] == 2
    assert summary["SmallNet"]["mean"] == pytest.approx(compact.accuracy + 0.25)
    assert summary["SmallNet"]["std"] == pytest.approx(0.25)
