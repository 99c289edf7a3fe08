"""Provides model persistence as JSON manifest plus sidecar weight blob.

The blob concatenates little-endian IEEE-754 values in layer order: per layer its parameters
(conv and linear: weight, then bias; batch norm: scale, shift) followed by its buffers (batch norm:
running mean, running variance). The manifest lists every array with offset and count and stores
the SHA-256 of the blob.
"""

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from expand_nets.expansion.expansion_types import ExpansionUnit
from expand_nets.network.network_graph import NetworkGraph
from expand_nets.network.network_layer_factory import LayerFactory
from expand_nets.tensor.tensor_types import TensorDType
from expand_nets.utils.errors import CorruptionError, FormatError, ModelVersionError
from expand_nets.utils.logger import logger


FORMAT_VERSION = 1


def model_paths(path: str | Path) -> tuple[Path, Path]:
    """Returns manifest and blob path, the blob shares the manifest stem with suffix .bin"""
    manifest = Path(path)
    if manifest.suffix != ".json":
        manifest = manifest.with_suffix(".json")
    return manifest, manifest.with_suffix(".bin")


def _little_endian(dtype: np.dtype) -> np.dtype:
    return np.dtype(dtype).newbyteorder("<")


def save_model(net: NetworkGraph, path: str | Path, extra: dict[str, Any] | None = None):
    """Writes manifest and blob, extra is stored as is under the preprocessing key"""
    manifest_path, blob_path = model_paths(path)
    dtype = TensorDType.FLOAT64 if net.dtype == np.float64 else TensorDType.FLOAT32
    storage = _little_endian(dtype.numpy_dtype)

    chunks: list[bytes] = []
    offset = 0
    layers = []
    for layer in net.layers:
        arrays = []
        for name, value in layer.state_arrays():
            data = np.ascontiguousarray(value, dtype=storage).tobytes()
            arrays.append({"name": name, "shape": list(value.shape), "offset": offset, "count": int(value.size)})
            chunks.append(data)
            offset += len(data)
        layers.append({**layer.describe(), "arrays": arrays})
    blob = b"".join(chunks)

    manifest = {
        "format_version": FORMAT_VERSION,
        "name": net.name,
        "input_shape": list(net.input_shape),
        "num_classes": net.num_classes,
        "dtype": dtype.label,
        "param_count": net.param_count(),
        "layers": layers,
        "units": [x.to_dict() for x in net.units],
        "expansion": net.expansion,
        "preprocessing": extra,
        "blob_bytes": len(blob),
        "blob_sha256": hashlib.sha256(blob).hexdigest(),
    }
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    blob_path.write_bytes(blob)
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    logger().info("Saved model %s to %s (%d bytes of weights)", net.name, manifest_path, len(blob))


def read_manifest(path: str | Path) -> dict[str, Any]:
    """Reads and version checks a manifest"""
    manifest_path, _ = model_paths(path)
    if not manifest_path.is_file():
        raise FileNotFoundError(f"Model manifest {manifest_path} not found")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{manifest_path}: invalid JSON, {e.msg}", e.pos) from e
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"{manifest_path}: unsupported format version {version}")
    return manifest


def _read_array(blob: bytes, storage: np.dtype, array: dict[str, Any], target: np.ndarray, where: str):
    """Copies one manifest array entry from blob into target after bounds and shape checks"""
    name, offset, count, shape = array["name"], int(array["offset"]), int(array["count"]), tuple(array["shape"])
    if shape != target.shape or count != int(np.prod(shape, dtype=np.int64)):
        raise FormatError(f"{where}: array {name} has shape {list(shape)} and count {count}, "
                          f"expected shape {list(target.shape)}", offset)
    if offset < 0 or offset + count * storage.itemsize > len(blob):
        raise FormatError(f"{where}: array {name} exceeds the blob of {len(blob)} bytes", offset)
    target[...] = np.frombuffer(blob, dtype=storage, count=count, offset=offset).reshape(shape)


def load_model(path: str | Path) -> NetworkGraph:
    """Reads manifest and blob, verifies blob hash and rebuilds the network"""
    manifest_path, blob_path = model_paths(path)
    manifest = read_manifest(manifest_path)
    if not blob_path.is_file():
        raise FileNotFoundError(f"Model blob {blob_path} not found")
    blob = blob_path.read_bytes()
    if len(blob) != manifest["blob_bytes"]:
        raise FormatError(f"{blob_path}: expected {manifest['blob_bytes']} bytes, found {len(blob)}", len(blob))
    if hashlib.sha256(blob).hexdigest() != manifest["blob_sha256"]:
        raise CorruptionError(f"{blob_path}: content hash does not match manifest")

    dtype = TensorDType.from_label(manifest["dtype"]).numpy_dtype
    storage = _little_endian(dtype)
    factory = LayerFactory()
    layers = []
    for entry in manifest["layers"]:
        spec = {k: v for k, v in entry.items() if k != "arrays"}
        layer = factory.create_layer(spec, dtype)
        targets = {**layer.params, **layer.buffers}
        names = [x["name"] for x in entry.get("arrays", [])]
        if sorted(names) != sorted(targets):
            raise FormatError(f"{manifest_path}: layer {len(layers)} ({spec['kind']}) stores arrays {names}, "
                              f"expected {list(targets)}")
        for array in entry.get("arrays", []):
            _read_array(blob, storage, array, targets[array["name"]], f"{manifest_path}: layer {len(layers)}")
        layers.append(layer)

    units = [ExpansionUnit.from_dict(x) for x in manifest.get("units", [])]
    net = NetworkGraph(manifest["name"], tuple(manifest["input_shape"]), manifest["num_classes"], layers,
                       units, manifest.get("expansion"))
    logger().info("Loaded model %s from %s", net.name, manifest_path)
    return net
