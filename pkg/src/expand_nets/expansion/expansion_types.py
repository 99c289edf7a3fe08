"""Provides expansion types"""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any

from expand_nets.utils.errors import ExpansionError


class ExpansionStrategy(IntEnum):
    """Represents how a layer is expanded"""
    NONE = 0
    FC = 1 # chain of fully-connected layers
    CL = 2 # 1x1, k x k, 1x1 convolutions
    CK = 3 # (k - 1) / 2 consecutive 3x3 convolutions


    @property
    def label(self) -> str:
        """Getter for label used in manifests and variant names"""
        return self.name


    @staticmethod
    def from_label(label: str) -> "ExpansionStrategy":
        """Returns strategy matching label"""
        try:
            return ExpansionStrategy[label.upper()]
        except KeyError as e:
            raise ExpansionError(f"Unknown expansion strategy {label}") from e


@dataclass(frozen=True)
class ExpansionDirective:
    """Expansion of a single layer, depth is only used by FC"""
    strategy: ExpansionStrategy
    depth: int = 3


    def to_dict(self) -> dict[str, Any]:
        """Returns JSON compatible dict"""
        return {"strategy": self.strategy.label, "depth": self.depth}


    @staticmethod
    def from_dict(data: dict[str, Any]) -> "ExpansionDirective":
        """Creates directive from dict"""
        return ExpansionDirective(ExpansionStrategy.from_label(data["strategy"]), int(data.get("depth", 3)))


@dataclass
class ExpansionPlan:
    """Declares which layer (by index in the compact network) gets which strategy at expansion rate r.

    With keep_input_channels the unit replacing the first convolution keeps P1 = M channels in its
    first layer, reproducing the literal Conv1 rows of the reference architecture table.
    """
    rate: int = 4
    directives: dict[int, ExpansionDirective] = field(default_factory=dict)
    keep_input_channels: bool = False
    seed: int = 0


    @property
    def is_empty(self) -> bool:
        """True if no layer gets expanded"""
        return all(x.strategy == ExpansionStrategy.NONE for x in self.directives.values())


    @property
    def variant_name(self) -> str:
        """Returns variant name like CK+FC, empty for an empty plan"""
        used = {x.strategy for x in self.directives.values() if x.strategy != ExpansionStrategy.NONE}
        order = [ExpansionStrategy.CL, ExpansionStrategy.CK, ExpansionStrategy.FC]
        return "+".join(x.label for x in order if x in used)


    def to_dict(self) -> dict[str, Any]:
        """Returns JSON compatible dict, stored under the expansion key of a model manifest"""
        return {"rate": self.rate, "keep_input_channels": self.keep_input_channels, "seed": self.seed,
                "variant": self.variant_name,
                "directives": {str(k): v.to_dict() for k, v in sorted(self.directives.items())}}


    @staticmethod
    def from_dict(data: dict[str, Any]) -> "ExpansionPlan":
        """Creates plan from dict"""
        directives = {int(k): ExpansionDirective.from_dict(v) for k, v in data.get("directives", {}).items()}
        return ExpansionPlan(int(data["rate"]), directives, bool(data.get("keep_input_channels", False)),
                             int(data.get("seed", 0)))


@dataclass(frozen=True)
class ExpansionUnit:
    """Contiguous group of layers [start, stop) in an expanded network replacing one original layer"""
    original_spec: dict[str, Any]
    strategy: ExpansionStrategy
    start: int
    stop: int
    rate: int = 1


    @property
    def layer_range(self) -> range:
        """Getter for layer indices of this unit"""
        return range(self.start, self.stop)


    @property
    def expected_length(self) -> int:
        """Number of layers the strategy produces"""
        if self.strategy == ExpansionStrategy.CL:
            return 3
        if self.strategy == ExpansionStrategy.CK:
            return (self.original_spec["kernel_size"] - 1) // 2
        return self.stop - self.start


    def shifted(self, start: int, stop: int) -> "ExpansionUnit":
        """Returns unit with replaced range"""
        return ExpansionUnit(self.original_spec, self.strategy, start, stop, self.rate)


    def to_dict(self) -> dict[str, Any]:
        """Returns JSON compatible dict"""
        return {"original_spec": self.original_spec, "strategy": self.strategy.label,
                "start": self.start, "stop": self.stop, "rate": self.rate}


    @staticmethod
    def from_dict(data: dict[str, Any]) -> "ExpansionUnit":
        """Creates unit from dict"""
        return ExpansionUnit(dict(data["original_spec"]), ExpansionStrategy.from_label(data["strategy"]),
                             int(data["start"]), int(data["stop"]), int(data.get("rate", 1)))


    def __str__(self) -> str:
        return f"{self.strategy.label} unit [{self.start}, {self.stop}) for {self.original_spec}"
