"""Provides base class for all network layers"""

from typing import Any

import numpy as np

from expand_nets.utils.errors import ShapeError
from .network_types import LayerKind, Mode


Shape = tuple[int, ...]


class Layer():
    """Base class for all layers.

    A layer owns its trainable parameters (params) and non-trainable state (buffers). Forward returns
    the output and a cache, backward consumes that cache and returns the input gradient plus one
    gradient per parameter. Shapes passed to output_shape exclude the batch dimension.
    """

    KIND = LayerKind.UNDEFINED


    def __init__(self, dtype: np.dtype = np.float32):
        self._dtype = np.dtype(dtype)
        self._params: dict[str, np.ndarray] = {}
        self._buffers: dict[str, np.ndarray] = {}


    @property
    def kind(self) -> LayerKind:
        """Getter for kind"""
        return self.KIND


    @property
    def dtype(self) -> np.dtype:
        """Getter for dtype"""
        return self._dtype


    @property
    def params(self) -> dict[str, np.ndarray]:
        """Getter for trainable parameters"""
        return self._params


    @property
    def buffers(self) -> dict[str, np.ndarray]:
        """Getter for non trainable state"""
        return self._buffers


    @property
    def has_params(self) -> bool:
        """True if layer owns trainable parameters"""
        return len(self._params) > 0


    def decayed_param_names(self) -> set[str]:
        """Names of parameters weight decay applies to"""
        return set()


    def param_count(self) -> int:
        """Number of trainable scalars"""
        return sum(x.size for x in self._params.values())


    def hyperparameters(self) -> dict[str, Any]:
        """Returns layer hyperparameters, override in subclasses"""
        return {}


    def describe(self) -> dict[str, Any]:
        """Returns kind and hyperparameters, this is the layer spec without parameters"""
        return {"kind": self.kind.label, **self.hyperparameters()}


    def same_spec(self, other: "Layer") -> bool:
        """True if other has the same kind and hyperparameters"""
        return self.describe() == other.describe()


    def output_shape(self, input_shape: Shape) -> Shape:
        """Returns output shape for input_shape, override in subclasses"""
        return input_shape


    def initialize(self, rng: np.random.Generator):
        """Draws fresh parameters, override in subclasses"""
        _ = rng


    def zero(self):
        """Sets all parameters to zero"""
        for x in self._params.values():
            x.fill(0)


    def forward(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, Any]:
        """Returns output and cache for backward, override in subclasses"""
        _ = mode
        return x, None


    def backward(self, grad_y: np.ndarray, cache: Any) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        """Returns input gradient and parameter gradients, override in subclasses"""
        _ = cache
        return grad_y, {}


    def create_copy(self, with_params: bool = True) -> "Layer":
        """Returns a layer with identical spec, parameters and buffers are copied if with_params is True"""
        copy = type(self)(**self.hyperparameters(), dtype=self._dtype)
        if with_params:
            copy.load_state(self)
        return copy


    def load_state(self, other: "Layer"):
        """Copies parameters and buffers from other, shapes must match"""
        for target, source in ((self._params, other.params), (self._buffers, other.buffers)):
            if target.keys() != source.keys():
                raise ShapeError(f"Parameter names differ {list(target)} != {list(source)}")
            for name, value in source.items():
                if target[name].shape != value.shape:
                    raise ShapeError(f"Parameter {name} shape {value.shape} does not match {target[name].shape}")
                target[name][...] = value


    def astype(self, dtype: np.dtype) -> "Layer":
        """Returns a copy with parameters cast to dtype"""
        copy = type(self)(**self.hyperparameters(), dtype=dtype)
        for target, source in ((copy.params, self._params), (copy.buffers, self._buffers)):
            for name, value in source.items():
                target[name][...] = value.astype(dtype)
        return copy


    def state_arrays(self) -> list[tuple[str, np.ndarray]]:
        """Returns parameters followed by buffers in serialization order"""
        return list(self._params.items()) + list(self._buffers.items())


    def __repr__(self) -> str:
        return f"{self.kind.label} {self.hyperparameters()}"


    def __str__(self) -> str:
        values = ", ".join(f"{k}={v}" for k, v in self.hyperparameters().items())
        return f"{self.kind.label}({values})"
