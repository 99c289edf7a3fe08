"""Provides the command implementations: build, expand, train, compress, verify and eval"""

import argparse
import os
import shutil
from dataclasses import replace
from pathlib import Path

import numpy as np

from expand_nets.compression.compression_network import compress_network
from expand_nets.data.data_cifar import CifarFlavor, load_cifar
from expand_nets.data.data_model_io import load_model, model_paths, read_manifest, save_model
from expand_nets.data.data_synthetic import synthetic_split
from expand_nets.data.data_types import DatasetHandle
from expand_nets.expansion.expansion_network import build_nonlinear_counterpart, expand_network, plan_for_variant
from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_types import Mode
from expand_nets.tensor.tensor_types import TensorDType
from expand_nets.training.training_trainer import evaluate, init_from_counterpart, train
from expand_nets.training.training_types import TrainConfig
from expand_nets.utils.errors import ExpansionError, ShapeError, VerificationError
from expand_nets.utils.logger import logger
from expand_nets.utils.random_streams import StreamPurpose, random_stream
from expand_nets.zoo.zoo_smallnet import build_from_id


DATA_DIR_VARIABLE = "EXPANDNET_DATA_DIR"


def resolve_model(text: str, seed: int = 0) -> NetworkGraph:
    """Loads a model manifest, or builds a fresh model if text is an architecture id"""
    manifest, _ = model_paths(text)
    if text.endswith(".json") or manifest.is_file():
        return load_model(manifest)
    return build_from_id(text, seed)


def load_dataset(args: argparse.Namespace, num_classes: int) -> tuple[DatasetHandle, DatasetHandle]:
    """Loads train and eval split selected by the dataset flags"""
    if args.dataset == "synthetic":
        return synthetic_split(num_classes, args.synthetic_size, max(args.synthetic_size // 5, num_classes), args.seed)
    flavor = CifarFlavor.from_label(args.dataset)
    if flavor.num_classes != num_classes:
        raise ValueError(f"Model predicts {num_classes} classes, {flavor.label} has {flavor.num_classes}")
    data_dir = args.data_dir or os.environ.get(DATA_DIR_VARIABLE)
    if not data_dir:
        raise FileNotFoundError(f"No dataset directory, use --data-dir or set {DATA_DIR_VARIABLE}")
    return load_cifar(data_dir, flavor, args.subset, args.seed)


def cmd_build(args: argparse.Namespace) -> int:
    """Writes a freshly initialized model-zoo network"""
    save_model(build_from_id(args.arch, args.seed), args.model_out)
    return 0


def cmd_expand(args: argparse.Namespace) -> int:
    """Expands a compact model, without strategy flags the input is copied unchanged"""
    if args.cl and args.ck:
        raise ExpansionError("--cl and --ck cannot be combined")
    variant = "+".join(x for x, flag in (("CL", args.cl), ("CK", args.ck), ("FC", args.fc)) if flag)
    source_manifest, source_blob = model_paths(args.model_in)
    if not variant and source_manifest.is_file():
        target_manifest, target_blob = model_paths(args.model_out)
        shutil.copyfile(source_blob, target_blob)
        shutil.copyfile(source_manifest, target_manifest)
        logger().info("No expansion requested, copied %s to %s", source_manifest, target_manifest)
        return 0

    net = resolve_model(args.model_in, args.seed)
    plan = plan_for_variant(net, variant, args.rate, args.depth, args.keep_input_channels, args.seed)
    preprocessing = model_preprocessing(source_manifest) if source_manifest.is_file() else None
    save_model(expand_network(net, plan), args.model_out, preprocessing)
    return 0


def _train_config(args: argparse.Namespace) -> TrainConfig:
    milestones = tuple(int(x) for x in args.milestones.split(",") if x.strip()) if args.milestones else ()
    kept = tuple(x for x in milestones if x < args.epochs)
    if kept != milestones:
        logger().warning("Ignoring learning rate milestones >= %d epochs: %s", args.epochs,
                         [x for x in milestones if x not in kept])
    return TrainConfig(epochs=args.epochs, batch_size=args.batch_size, lr=args.lr, momentum=args.momentum,
                       weight_decay=args.weight_decay, lr_milestones=kept, lr_decay=args.lr_decay,
                       seed=args.seed, dtype=TensorDType.FLOAT32, augment=not args.no_augment)


def cmd_train(args: argparse.Namespace) -> int:
    """Trains a model, optionally initialized from its trained nonlinear counterpart"""
    net = resolve_model(args.model_in, args.seed)
    cfg = _train_config(args)
    train_data, eval_data = load_dataset(args, net.num_classes)

    if args.init_from_counterpart:
        counterpart = build_nonlinear_counterpart(net, args.counterpart_slope)
        counterpart_epochs = args.counterpart_epochs or cfg.epochs
        counterpart_cfg = replace(cfg, epochs=counterpart_epochs,
                                  lr_milestones=tuple(x for x in cfg.lr_milestones if x < counterpart_epochs))
        counterpart_report = train(counterpart, train_data, counterpart_cfg, eval_data)
        if args.report:
            report_path = Path(args.report)
            report_path.with_suffix(".counterpart.jsonl").write_text(counterpart_report.to_jsonl(), encoding="utf-8")
        init_from_counterpart(net, counterpart)

    report = train(net, train_data, cfg, eval_data)
    report.run["init_from_counterpart"] = bool(args.init_from_counterpart)
    if args.report:
        Path(args.report).write_text(report.to_jsonl(), encoding="utf-8")
    save_model(net, args.model_out, train_data.stats.to_dict())
    return 0


def cmd_compress(args: argparse.Namespace) -> int:
    """Collapses all expansion units of a model"""
    net = load_model(args.model_in)
    save_model(compress_network(net), args.model_out, model_preprocessing(args.model_in))
    return 0


def model_preprocessing(path: str) -> dict | None:
    """Returns the preprocessing record stored in a model manifest"""
    return read_manifest(path).get("preprocessing")


def cmd_verify(args: argparse.Namespace) -> int:
    """Compares outputs of two models on random inputs, fails if max abs diff exceeds the tolerance"""
    net_a = resolve_model(args.model_a, args.seed)
    net_b = resolve_model(args.model_b, args.seed)
    if net_a.input_shape != net_b.input_shape:
        raise ShapeError(f"Input shapes differ {net_a.input_shape} != {net_b.input_shape}")
    if args.float64:
        net_a, net_b = net_a.astype(np.float64), net_b.astype(np.float64)

    rng = random_stream(args.seed, StreamPurpose.VERIFY_INPUT)
    max_abs, max_rel = 0.0, 0.0
    for _ in range(args.trials):
        x = rng.normal(0.0, 1.0, (1, *net_a.input_shape))
        y_a = net_a.forward(x.astype(net_a.dtype), Mode.EVAL).astype(np.float64)
        y_b = net_b.forward(x.astype(net_b.dtype), Mode.EVAL).astype(np.float64)
        if y_a.shape != y_b.shape:
            raise ShapeError(f"Output shapes differ {y_a.shape} != {y_b.shape}")
        diff = np.abs(y_a - y_b)
        max_abs = max(max_abs, float(diff.max()))
        max_rel = max(max_rel, float((diff / np.maximum(np.abs(y_a), 1e-12)).max()))

    print(f"max abs diff {max_abs:.3e}, max rel diff {max_rel:.3e}, tolerance {args.tol:.1e}")
    if max_abs > args.tol:
        raise VerificationError(f"Models differ by {max_abs:.3e} > {args.tol:.1e}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    """Prints top-1 accuracy on the eval split"""
    net = resolve_model(args.model_in, args.seed)
    _, eval_data = load_dataset(args, net.num_classes)
    accuracy = evaluate(net, eval_data)
    print(f"top-1 accuracy {accuracy:.4f} ({len(eval_data)} images)")
    return 0
