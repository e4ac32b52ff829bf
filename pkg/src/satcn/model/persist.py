"""Self-describing binary model files.

Layout (all integers unsigned 32 bit little-endian)::

    MAGIC | format version | header length | JSON header | tensor payload

The header holds the architecture, the normalization statistics, `deg`,
seed, config hash and the name, shape and byte offset of every tensor. The
payload is the concatenation of all tensors as little-endian float64. The
header is written with sorted keys, so equal models give equal bytes.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from satcn.core.errors import DataError
from satcn.core.models import ArchConfig
from satcn.sampling import Normalization

from .satcn import SatcnModel, parameter_shapes

logger = logging.getLogger("satcn")

MAGIC: bytes = b"SATCNMDL"
FORMAT_VERSION: int = 1

_U32 = struct.Struct("<I")


def model_to_bytes(m: SatcnModel) -> bytes:
    """Serialize a model."""
    tensors = []
    payload = bytearray()
    for name in parameter_shapes(m.arch):
        arr = np.ascontiguousarray(m.params[name], dtype="<f8")
        tensors.append({"name": name, "shape": list(arr.shape), "offset": len(payload)})
        payload += arr.tobytes()
    header: Dict[str, Any] = {
        "arch": m.arch.model_dump(mode="json"),
        "config_hash": m.config_hash,
        "d_max": float(m.d_max),
        "deg": float(m.deg),
        "norm": {"mean": float(m.norm.mean), "std": float(m.norm.std)},
        "seed": int(m.seed),
        "tensors": tensors,
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return b"".join(
        [MAGIC, _U32.pack(FORMAT_VERSION), _U32.pack(len(blob)), blob, bytes(payload)]
    )


def model_from_bytes(data: bytes) -> SatcnModel:
    """Deserialize a model.

    Raises:
        DataError: if the bytes are not a valid model file of a known version.

    """
    prefix = len(MAGIC) + 2 * _U32.size
    if len(data) < prefix or data[: len(MAGIC)] != MAGIC:
        raise DataError("Not a satcn model file.")
    (version,) = _U32.unpack_from(data, len(MAGIC))
    if version != FORMAT_VERSION:
        raise DataError(f"Unsupported model format version {version}.")
    (hlen,) = _U32.unpack_from(data, len(MAGIC) + _U32.size)
    if prefix + hlen > len(data):
        raise DataError("Model file is truncated (header).")
    try:
        header = json.loads(data[prefix : prefix + hlen].decode("utf-8"))
        arch = ArchConfig(**header["arch"])
    except (ValueError, KeyError, TypeError) as e:
        raise DataError(f"Invalid model file header: {e}") from e

    payload = memoryview(data)[prefix + hlen :]
    params = {}
    for entry in header.get("tensors", []):
        shape = tuple(entry["shape"])
        count = int(np.prod(shape, dtype=np.int64))
        start = int(entry["offset"])
        if start < 0 or start + 8 * count > len(payload):
            raise DataError(f"Model file is truncated (tensor '{entry['name']}').")
        arr = np.frombuffer(payload, dtype="<f8", count=count, offset=start)
        params[entry["name"]] = arr.astype(np.float64).reshape(shape)

    return SatcnModel(
        arch=arch,
        params=params,
        deg=float(header["deg"]),
        norm=Normalization(**header["norm"]),
        d_max=float(header.get("d_max", 0.0)),
        seed=int(header.get("seed", 0)),
        config_hash=str(header.get("config_hash", "")),
    )


def save_model(m: SatcnModel, path: Union[str, Path]) -> Path:
    """Write a model file and return its path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(model_to_bytes(m))
    logger.verbose(f"Wrote model to {path}")
    return path


def load_model(path: Union[str, Path]) -> SatcnModel:
    """Read a model file.

    Raises:
        DataError: if the file is missing or not a valid model file.

    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"Model file does not exist: {path}")
    m = model_from_bytes(path.read_bytes())
    logger.debug(f"Loaded model from {path} (config hash {m.config_hash}).")
    return m
