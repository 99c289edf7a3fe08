"""Provides training types"""

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from expand_nets.tensor.tensor_types import TensorDType


@dataclass(frozen=True)
class TrainConfig:
    """SGD hyperparameters, defaults follow the CIFAR protocol: 150 epochs, batch 128, momentum 0.9,
    lr 0.01 divided by 10 at epochs 50 and 100"""
    epochs: int = 150
    batch_size: int = 128
    lr: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 0.0
    lr_milestones: tuple[int, ...] = (50, 100)
    lr_decay: float = 0.1
    seed: int = 0
    dtype: TensorDType = TensorDType.FLOAT32
    augment: bool = True


    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"Learning rate must be positive {self.lr}")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError(f"Epochs and batch size must be positive {self.epochs}, {self.batch_size}")
        milestones = list(self.lr_milestones)
        if milestones != sorted(set(milestones)) or any(x >= self.epochs or x < 0 for x in milestones):
            raise ValueError(f"Milestones must be strictly increasing and < epochs {self.epochs}: {milestones}")


    @staticmethod
    def cifar_protocol(**overrides: Any) -> "TrainConfig":
        """CIFAR protocol without weight decay"""
        return TrainConfig(**overrides)


    @staticmethod
    def ablation_protocol(**overrides: Any) -> "TrainConfig":
        """Ablation protocol, CIFAR protocol with weight decay 0.0005"""
        return TrainConfig(**{"weight_decay": 0.0005, **overrides})


    def lr_at(self, epoch: int) -> float:
        """Learning rate of epoch (0-based) after milestone decay"""
        passed = sum(1 for x in self.lr_milestones if x <= epoch)
        return self.lr * self.lr_decay ** passed


    def to_dict(self) -> dict[str, Any]:
        """Returns JSON compatible dict"""
        result = asdict(self)
        result["lr_milestones"] = list(self.lr_milestones)
        result["dtype"] = self.dtype.label
        return result


@dataclass(frozen=True)
class EpochRecord:
    """Result of one epoch"""
    epoch: int
    lr: float
    train_loss: float
    eval_acc: float | None
    wall_ms: int


@dataclass
class TrainReport:
    """Per-epoch records plus run information (config, augmentation, normalization)"""
    run: dict[str, Any] = field(default_factory=dict)
    records: list[EpochRecord] = field(default_factory=list)


    @property
    def losses(self) -> list[float]:
        """Getter for train loss curve"""
        return [x.train_loss for x in self.records]


    @property
    def final_accuracy(self) -> float | None:
        """Getter for eval accuracy after the last epoch"""
        return self.records[-1].eval_acc if self.records else None


    def deterministic_view(self) -> list[tuple]:
        """Records without wall clock time, equal for runs with equal seeds"""
        return [(x.epoch, x.lr, x.train_loss, x.eval_acc) for x in self.records]


    def to_jsonl(self) -> str:
        """First line holds run information, every following line one epoch"""
        lines = [json.dumps({"run": self.run})]
        lines.extend(json.dumps(asdict(x)) for x in self.records)
        return "\n".join(lines) + "\n"


    @staticmethod
    def from_jsonl(text: str) -> "TrainReport":
        """Parses output of to_jsonl"""
        report = TrainReport()
        for line in text.splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            if "run" in entry:
                report.run = entry["run"]
            else:
                report.records.append(EpochRecord(**entry))
        return report
