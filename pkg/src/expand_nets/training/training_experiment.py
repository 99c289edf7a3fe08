"""Provides the variant runner shared by the experiment scripts.

A variant label is "SmallNet" for the compact network or an expansion variant like "CL+FC", optionally
suffixed with "+Init" to initialize the ExpandNet from its trained nonlinear counterpart.
"""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from expand_nets.compression.compression_network import compress_network
from expand_nets.data.data_types import DatasetHandle
from expand_nets.expansion.expansion_network import build_nonlinear_counterpart
from expand_nets.network.network_graph import NetworkGraph
from expand_nets.utils.errors import ExpansionError
from expand_nets.utils.logger import logger
from expand_nets.zoo.zoo_smallnet import VARIANTS, build_expandnet_variant
from .training_trainer import evaluate, init_from_counterpart, predictions, train
from .training_types import TrainConfig


COMPACT_LABEL = "SmallNet"
INIT_SUFFIX = "Init"


@dataclass(frozen=True)
class VariantSpec:
    """Expansion variant (None for the compact network) and counterpart initialization flag"""
    expansion: str | None = None
    init_from_counterpart: bool = False


    def __post_init__(self):
        if self.expansion is not None and self.expansion not in VARIANTS:
            raise ExpansionError(f"Unknown variant {self.expansion}, expected one of {', '.join(VARIANTS)}")
        if self.expansion is None and self.init_from_counterpart:
            raise ExpansionError("The compact network has no counterpart to initialize from")


    @property
    def label(self) -> str:
        """Getter for label, e.g. CL+FC+Init"""
        if self.expansion is None:
            return COMPACT_LABEL
        return f"{self.expansion}+{INIT_SUFFIX}" if self.init_from_counterpart else self.expansion


    @staticmethod
    def parse(text: str) -> "VariantSpec":
        """Parses labels like SmallNet, CK, CL+FC+Init (case insensitive)"""
        parts = [x.strip().upper() for x in text.split("+") if x.strip()]
        init = bool(parts) and parts[-1] == INIT_SUFFIX.upper()
        if init:
            parts = parts[:-1]
        if not parts:
            raise ExpansionError(f"Invalid variant label {text}")
        if parts == [COMPACT_LABEL.upper()]:
            return VariantSpec(None, init)
        return VariantSpec("+".join(parts), init)


@dataclass
class VariantResult:
    """Outcome of one run, accuracy is measured on the compressed network for ExpandNets"""
    variant: str
    seed: int
    accuracy: float
    curve: list[float | None] = field(default_factory=list)
    agreement: float | None = None
    counterpart_accuracy: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)


    def to_dict(self) -> dict[str, Any]:
        """Returns JSON compatible dict"""
        return asdict(self)


def run_variant(base: NetworkGraph, variant: VariantSpec, train_data: DatasetHandle, eval_data: DatasetHandle,
                cfg: TrainConfig, rate: int = 4, counterpart_slope: float | None = None,
                report_dir: Path | None = None) -> VariantResult:
    """Expands base (the compact variant trains base itself), trains, compresses and evaluates.

    With report_dir every training report is written as <label>-seed<seed>.jsonl, the counterpart
    report as <label>-seed<seed>.counterpart.jsonl.
    """
    net = base if variant.expansion is None else build_expandnet_variant(base, variant.expansion, rate, seed=cfg.seed)
    stem = f"{variant.label}-seed{cfg.seed}"

    counterpart_accuracy = None
    if variant.init_from_counterpart:
        counterpart = build_nonlinear_counterpart(net, counterpart_slope)
        counterpart_report = train(counterpart, train_data, cfg, eval_data)
        counterpart_accuracy = counterpart_report.final_accuracy
        init_from_counterpart(net, counterpart)
        if report_dir is not None:
            (report_dir / f"{stem}.counterpart.jsonl").write_text(counterpart_report.to_jsonl(), encoding="utf-8")

    report = train(net, train_data, cfg, eval_data)
    report.run.update(variant=variant.label, rate=rate, init_from_counterpart=variant.init_from_counterpart)
    if report_dir is not None:
        (report_dir / f"{stem}.jsonl").write_text(report.to_jsonl(), encoding="utf-8")

    result = VariantResult(variant.label, cfg.seed, 0.0, [x.eval_acc for x in report.records],
                           counterpart_accuracy=counterpart_accuracy)
    if net.units:
        compressed = compress_network(net)
        result.agreement = float((predictions(net, eval_data) == predictions(compressed, eval_data)).mean())
        result.accuracy = evaluate(compressed, eval_data)
        if result.agreement < 1.0:
            logger().warning("Compressed %s disagrees with the ExpandNet on %.4f%% of eval images",
                             variant.label, 100 * (1 - result.agreement))
    else:
        result.accuracy = evaluate(net, eval_data)
    logger().info("%s seed %d: top-1 %.4f", variant.label, cfg.seed, result.accuracy)
    return result


def summarize_results(results: list[VariantResult]) -> dict[str, dict[str, float]]:
    """Mean, std and run count of accuracy per variant label, in first appearance order"""
    summary: dict[str, dict[str, float]] = {}
    for label in dict.fromkeys(x.variant for x in results):
        accuracies = np.array([x.accuracy for x in results if x.variant == label])
        summary[label] = {"mean": float(accuracies.mean()), "std": float(accuracies.std()), "runs": len(accuracies)}
    return summary
