"""Provides error types, all of them are ValueErrors so callers may catch ValueError only"""


class ShapeError(ValueError):
    """Raised when tensor or layer shapes do not fit together"""


    def __init__(self, message: str, layer_index: int | None = None):
        if layer_index is not None:
            message = f"Layer {layer_index}: {message}"
        super().__init__(message)
        self._layer_index = layer_index


    @property
    def layer_index(self) -> int | None:
        """Getter for index of the layer that failed, None if not layer related"""
        return self._layer_index


class ExpansionError(ValueError):
    """Raised when an expansion directive does not fit a layer"""


class CompressionError(ValueError):
    """Raised when an expanded unit cannot be collapsed exactly"""


class FormatError(ValueError):
    """Raised when a dataset or model file is malformed"""


    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self._byte_offset = byte_offset


    @property
    def byte_offset(self) -> int | None:
        """Getter for byte offset where the problem was detected"""
        return self._byte_offset


class ModelVersionError(FormatError):
    """Raised for unknown manifest versions or layer kinds"""


class CorruptionError(FormatError):
    """Raised when a weight blob does not match the hash stored in its manifest"""


class VerificationError(ValueError):
    """Raised when two models disagree beyond the tolerance"""
