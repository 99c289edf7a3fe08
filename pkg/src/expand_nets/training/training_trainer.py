"""Provides the training loop, evaluation and initialization from the nonlinear counterpart"""

import time

import numpy as np

from expand_nets.data.data_types import DatasetHandle
from expand_nets.network.network_activation import LeakyReLU, ReLU
from expand_nets.network.network_graph import NetworkGraph
from expand_nets.utils.errors import ShapeError
from expand_nets.utils.logger import logger
from expand_nets.utils.random_streams import StreamPurpose, random_stream
from .training_augment import augment_batch
from .training_optimizer import SgdOptimizer
from .training_tape import backward
from .training_types import EpochRecord, TrainConfig, TrainReport


def predictions(net: NetworkGraph, data: DatasetHandle, batch_size: int = 500) -> np.ndarray:
    """Top-1 predictions in eval mode"""
    result = [net.predict(data.images[i:i + batch_size].astype(net.dtype)) for i in range(0, len(data), batch_size)]
    return np.concatenate(result) if result else np.zeros(0, dtype=np.int64)


def evaluate(net: NetworkGraph, data: DatasetHandle, batch_size: int = 500) -> float:
    """Top-1 accuracy in eval mode"""
    if len(data) == 0:
        raise ValueError(f"Dataset {data.name} is empty")
    return float((predictions(net, data, batch_size) == data.labels).mean())


def train(net: NetworkGraph, data: DatasetHandle, cfg: TrainConfig, eval_data: DatasetHandle | None = None) -> TrainReport:
    """Trains net in place with shuffled mini-batches, deterministic given cfg.seed"""
    if len(data) == 0:
        raise ValueError(f"Dataset {data.name} is empty")
    dtype = cfg.dtype.numpy_dtype
    if net.dtype != dtype:
        raise ValueError(f"Network dtype {net.dtype} does not match training dtype {dtype}")

    report = TrainReport(run={"model": net.name, "dataset": data.name, "train_samples": len(data),
                              "config": cfg.to_dict(),
                              "augmentation": "horizontal flip + 4 pixel pad-crop" if cfg.augment else "none",
                              "normalization": data.stats.to_dict()})
    optimizer = SgdOptimizer(net, cfg)
    logger().info("Training %s on %d samples for %d epochs", net.name, len(data), cfg.epochs)
    for epoch in range(cfg.epochs):
        start = time.perf_counter()
        order = random_stream(cfg.seed, StreamPurpose.SHUFFLE, epoch).permutation(len(data))
        total_loss = 0.0
        seen = 0
        for batch_index, first in enumerate(range(0, len(order), cfg.batch_size)):
            indices = order[first:first + cfg.batch_size]
            if len(indices) < 2:
                # batch statistics need at least two samples
                continue
            x = data.images[indices].astype(dtype)
            if cfg.augment:
                x = augment_batch(x, random_stream(cfg.seed, StreamPurpose.AUGMENT, epoch, batch_index))
            loss, tape = backward(net, x, data.labels[indices])
            optimizer.step(tape, epoch)
            total_loss += loss * len(indices)
            seen += len(indices)

        if seen == 0:
            raise ValueError(f"No batch of {data.name} holds at least two samples, "
                             f"batch size {cfg.batch_size}, {len(data)} samples")
        eval_acc = evaluate(net, eval_data) if eval_data is not None else None
        record = EpochRecord(epoch, cfg.lr_at(epoch), total_loss / seen, eval_acc,
                             int((time.perf_counter() - start) * 1000))
        report.records.append(record)
        logger().info("Epoch %d, lr %g, loss %.4f, eval acc %s", epoch, record.lr, record.train_loss,
                      "-" if eval_acc is None else f"{eval_acc:.4f}")
    return report


def init_from_counterpart(expanded: NetworkGraph, counterpart: NetworkGraph):
    """Copies every parameter and buffer of the trained nonlinear counterpart into the ExpandNet"""
    interior = {i for unit in counterpart.units for i in range(unit.start, unit.stop)
                if isinstance(counterpart.layers[i], (ReLU, LeakyReLU))}
    sources = [x for i, x in enumerate(counterpart.layers) if i not in interior]
    if len(sources) != len(expanded.layers):
        raise ShapeError(f"Counterpart has {len(sources)} layers besides interior activations, "
                         f"ExpandNet has {len(expanded.layers)}")
    for i, (target, source) in enumerate(zip(expanded.layers, sources)):
        if not target.same_spec(source):
            raise ShapeError(f"Counterpart layer {source} does not match {target}", i)
        target.load_state(source)
    logger().info("Initialized %s from %s", expanded.name, counterpart.name)
