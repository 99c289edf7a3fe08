"""Provides a layer factory class"""

from typing import Any

import numpy as np

from expand_nets.utils.errors import ModelVersionError
from expand_nets.utils.logger import logger
from .network_layer import Layer
from .network_types import LayerKind
# imported so every layer class is registered as subclass of Layer
from .network_activation import LeakyReLU, ReLU # pylint:disable=unused-import
from .network_batch_norm import BatchNorm # pylint:disable=unused-import
from .network_conv2d import Conv2d # pylint:disable=unused-import
from .network_flatten import Flatten # pylint:disable=unused-import
from .network_linear import Linear # pylint:disable=unused-import
from .network_max_pool import MaxPool # pylint:disable=unused-import


class LayerFactory():
    """Layer factory class, creates layers from a layer spec (kind label plus hyperparameters)"""


    def __init__(self):
        self._classes: dict[LayerKind, type[Layer]] = {}
        # register all subclasses of Layer
        self._handle_class(Layer)


    def register_layer(self, cls: type[Layer]):
        """Register a layer class"""
        logger().debug("Register layer: %s", cls.__name__)
        self._classes[cls.KIND] = cls


    def create_layer(self, spec: dict[str, Any], dtype: np.dtype = np.float32) -> Layer:
        """Create a layer with zero parameters from spec"""
        hyperparameters = dict(spec)
        label = hyperparameters.pop("kind", None)
        try:
            kind = LayerKind.from_label(label)
        except ValueError as e:
            raise ModelVersionError(f"Unknown layer kind {label}") from e
        if kind not in self._classes:
            raise ModelVersionError(f"No layer class registered for {label}")
        return self._classes[kind](**hyperparameters, dtype=dtype)


    def _handle_class(self, cls: type[Layer]):
        """Register all subclasses from cls"""
        for x in cls.__subclasses__():
            if x.KIND != LayerKind.UNDEFINED:
                self.register_layer(x)
            # handle subclasses of this class
            self._handle_class(x)
