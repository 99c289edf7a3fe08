"""Provides the sequential network graph used for compact networks, ExpandNets and nonlinear counterparts"""

from typing import TYPE_CHECKING, Any

import numpy as np

from expand_nets.utils.errors import ShapeError
from expand_nets.utils.logger import logger
from expand_nets.utils.random_streams import StreamPurpose, random_stream
from .network_layer import Layer, Shape
from .network_types import InitKind, InitScheme, Mode

if TYPE_CHECKING:
    from expand_nets.expansion.expansion_types import ExpansionUnit


class NetworkGraph():
    """Ordered sequence of layers evaluated one after another.

    units holds the expansion units of an ExpandNet (disjoint, contiguous half-open layer ranges),
    expansion the serialized plan the network was expanded with (provenance), both empty for
    compact networks.
    """


    def __init__(self, name: str, input_shape: Shape, num_classes: int, layers: list[Layer],
                 units: list["ExpansionUnit"] | None = None, expansion: dict[str, Any] | None = None):
        self._name = name
        self._input_shape = tuple(input_shape)
        self._num_classes = num_classes
        self._layers = layers
        self._units: list["ExpansionUnit"] = [] if units is None else units
        self._expansion = expansion
        self._shapes = self._compute_shapes()
        self._check_units()


    @property
    def name(self) -> str:
        """Getter for name"""
        return self._name


    @property
    def input_shape(self) -> Shape:
        """Getter for input shape (c, h, w) without batch dimension"""
        return self._input_shape


    @property
    def num_classes(self) -> int:
        """Getter for number of classes"""
        return self._num_classes


    @property
    def layers(self) -> list[Layer]:
        """Getter for layers"""
        return self._layers


    @property
    def units(self) -> list["ExpansionUnit"]:
        """Getter for expansion units"""
        return self._units


    @property
    def expansion(self) -> dict[str, Any] | None:
        """Getter for serialized expansion plan"""
        return self._expansion


    @property
    def dtype(self) -> np.dtype:
        """Getter for dtype of first layer"""
        return self._layers[0].dtype if self._layers else np.dtype(np.float32)


    @property
    def shapes(self) -> list[Shape]:
        """Getter for output shape of every layer"""
        return self._shapes


    def initialize(self, seed: int):
        """Draws fresh parameters, layer i uses a stream keyed by seed and i"""
        for i, layer in enumerate(self._layers):
            layer.initialize(random_stream(seed, StreamPurpose.LAYER_INIT, i))


    def forward(self, x: np.ndarray, mode: Mode = Mode.EVAL) -> np.ndarray:
        """Evaluates network and returns logits"""
        y, _ = self.forward_with_caches(x, mode)
        return y


    def forward_with_caches(self, x: np.ndarray, mode: Mode) -> tuple[np.ndarray, list[Any]]:
        """Evaluates network and returns logits together with the cache of every layer"""
        if x.shape[1:] != self._input_shape:
            raise ShapeError(f"Input shape {x.shape[1:]} does not match network input {self._input_shape}")
        caches = []
        for i, layer in enumerate(self._layers):
            try:
                x, cache = layer.forward(x, mode)
            except ShapeError as e:
                raise ShapeError(str(e), i) from e
            caches.append(cache)
        return x, caches


    def predict(self, x: np.ndarray) -> np.ndarray:
        """Returns top-1 class per sample in eval mode"""
        return self.forward(x, Mode.EVAL).argmax(axis=1)


    def param_count(self) -> int:
        """Total number of trainable scalars"""
        return sum(x.param_count() for x in self._layers)


    def describe(self) -> list[dict[str, Any]]:
        """Returns layer specs without parameters"""
        return [x.describe() for x in self._layers]


    def same_architecture(self, other: "NetworkGraph") -> bool:
        """True if other has an identical layer spec sequence and input shape"""
        return self._input_shape == other.input_shape and self.describe() == other.describe()


    def clone_architecture(self, init: InitScheme) -> "NetworkGraph":
        """Returns a network with the same specs and units, parameters created per init scheme"""
        layers = [x.create_copy(with_params=init.kind == InitKind.COPY) for x in self._layers]
        clone = self._with_layers(layers)
        if init.kind == InitKind.KAIMING:
            clone.initialize(init.seed)
        elif init.kind == InitKind.ZEROS:
            for layer in clone.layers:
                layer.zero()
        return clone


    def astype(self, dtype: np.dtype) -> "NetworkGraph":
        """Returns a copy with all parameters cast to dtype"""
        return self._with_layers([x.astype(dtype) for x in self._layers])


    def with_metadata(self, name: str | None = None, units: list["ExpansionUnit"] | None = None,
                      expansion: dict[str, Any] | None = None) -> "NetworkGraph":
        """Returns a network sharing the layers with replaced name, units and expansion provenance"""
        return NetworkGraph(self._name if name is None else name, self._input_shape, self._num_classes,
                            self._layers, self._units if units is None else units,
                            self._expansion if expansion is None else expansion)


    def _with_layers(self, layers: list[Layer]) -> "NetworkGraph":
        return NetworkGraph(self._name, self._input_shape, self._num_classes, layers, list(self._units), self._expansion)


    def _compute_shapes(self) -> list[Shape]:
        """Walks layers and checks adjacent layers fit together"""
        result = []
        shape = self._input_shape
        for i, layer in enumerate(self._layers):
            try:
                shape = layer.output_shape(shape)
            except ShapeError as e:
                raise ShapeError(str(e), i) from e
            result.append(shape)
        return result


    def _check_units(self):
        """Checks that units reference disjoint contiguous ranges inside the network"""
        end = 0
        for unit in sorted(self._units, key=lambda u: u.start):
            if unit.start < end or unit.stop > len(self._layers) or unit.start >= unit.stop:
                raise ValueError(f"Expansion unit range [{unit.start}, {unit.stop}) invalid or overlapping")
            end = unit.stop


    def log_summary(self):
        """Logs layers and parameter count"""
        logger().info("Network %s, %d layers, %d parameters", self._name, len(self._layers), self.param_count())
        for i, (layer, shape) in enumerate(zip(self._layers, self._shapes)):
            logger().debug("  %d %s -> %s", i, layer, shape)


    def __repr__(self) -> str:
        return f"NetworkGraph {self._name}, {len(self._layers)} layers, {len(self._units)} units"
