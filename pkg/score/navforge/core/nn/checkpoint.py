# *******************************************************************************
# Copyright (c) 2026 Contributors to the Eclipse Foundation
#
# See the NOTICE file(s) distributed with this work for additional
# information regarding copyright ownership.
#
# This program and the accompanying materials are made available under the
# terms of the Apache License Version 2.0 which is available at
# https://www.apache.org/licenses/LICENSE-2.0
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""Versioned binary checkpoints of networks, optimizer state and extra arrays.

Layout (all integers little-endian)::

    b"NAVF"                 magic
    uint16                  format version
    uint32                  manifest length in bytes
    manifest                UTF-8 JSON: layer shapes, activations, optimizer
                            hyper-parameters, array shapes, free-form meta
    payload                 float64 little-endian, in manifest order
    uint32                  CRC-32 of everything above

Payload order: for each network (sorted by name) every layer's weights then
bias; for each optimizer (sorted) all first moments then all second moments;
then each extra array (sorted).
"""

import json
import logging
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from score.navforge.core.nn.adam import AdamState
from score.navforge.core.nn.dense import Activation, DenseLayer, DenseNet
from score.navforge.errors import CheckpointError


logger = logging.getLogger(__name__)

MAGIC = b"NAVF"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sHI")
_CRC = struct.Struct("<I")
_FLOAT = np.dtype("<f8")


@dataclass
class Checkpoint:
    nets: dict[str, DenseNet] = field(default_factory=dict)
    optimizers: dict[str, AdamState] = field(default_factory=dict)
    arrays: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def manifest(self) -> dict:
        return {
            "nets": {
                name: [
                    {"out": layer.out_size, "in": layer.in_size, "activation": layer.activation.value}
                    for layer in net.layers
                ]
                for name, net in sorted(self.nets.items())
            },
            "optimizers": {
                name: {
                    "shapes": [list(shape) for shape in state.shapes],
                    "step": state.step,
                    "learning_rate": state.learning_rate,
                    "beta1": state.beta1,
                    "beta2": state.beta2,
                    "eps": state.eps,
                }
                for name, state in sorted(self.optimizers.items())
            },
            "arrays": {name: list(np.shape(value)) for name, value in sorted(self.arrays.items())},
            "meta": self.meta,
        }


def _payload_arrays(checkpoint: Checkpoint) -> list[np.ndarray]:
    arrays = []
    for _, net in sorted(checkpoint.nets.items()):
        arrays += net.parameters()
    for _, state in sorted(checkpoint.optimizers.items()):
        arrays += state.first_moment + state.second_moment
    for _, value in sorted(checkpoint.arrays.items()):
        arrays.append(np.asarray(value, dtype=np.float64))
    return arrays


def serialize(checkpoint: Checkpoint) -> bytes:
    manifest = json.dumps(checkpoint.manifest(), sort_keys=True).encode("utf-8")
    payload = b"".join(np.ascontiguousarray(a, dtype=_FLOAT).tobytes() for a in _payload_arrays(checkpoint))
    body = _PREFIX.pack(MAGIC, FORMAT_VERSION, len(manifest)) + manifest + payload
    return body + _CRC.pack(zlib.crc32(body))


def manifest_diff(expected: dict, actual: dict) -> list[str]:
    """Human-readable differences between two manifests, meta excluded."""
    differences = []
    for section in ("nets", "optimizers", "arrays"):
        want, have = expected.get(section, {}), actual.get(section, {})
        for name in sorted(set(want) | set(have)):
            if name not in have:
                differences.append(f"{section}.{name}: missing in checkpoint")
            elif name not in want:
                differences.append(f"{section}.{name}: unexpected in checkpoint")
            elif section == "optimizers":
                if want[name]["shapes"] != have[name]["shapes"]:
                    want_shapes, have_shapes = want[name]["shapes"], have[name]["shapes"]
                    differences.append(f"{section}.{name}: expected {want_shapes}, found {have_shapes}")
            elif want[name] != have[name]:
                differences.append(f"{section}.{name}: expected {want[name]}, found {have[name]}")
    return differences


def deserialize(data: bytes, expected_manifest: dict | None = None) -> Checkpoint:
    """Parse checkpoint bytes.

    :param bytes data: Checkpoint content.
    :param dict expected_manifest: When given, the stored layout must match it.
    :raises CheckpointError: On truncation, bad magic, unknown version, CRC
        mismatch or a layout differing from ``expected_manifest``.
    """
    if len(data) < _PREFIX.size + _CRC.size:
        raise CheckpointError(f"Checkpoint truncated: {len(data)} bytes")
    magic, version, manifest_size = _PREFIX.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError(f"Not a navforge checkpoint (magic {magic!r})")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"Unsupported checkpoint format version {version}, expected {FORMAT_VERSION}")
    body, (crc,) = data[: -_CRC.size], _CRC.unpack(data[-_CRC.size :])
    if len(body) < _PREFIX.size + manifest_size:
        raise CheckpointError("Checkpoint truncated inside the manifest")
    if zlib.crc32(body) != crc:
        raise CheckpointError("Checkpoint CRC mismatch, file is truncated or corrupted")

    try:
        manifest = json.loads(body[_PREFIX.size : _PREFIX.size + manifest_size].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"Checkpoint manifest is unreadable: {exc}") from exc
    if expected_manifest is not None:
        differences = manifest_diff(expected_manifest, manifest)
        if differences:
            raise CheckpointError("Checkpoint layout mismatch:\n  " + "\n  ".join(differences))

    payload_bytes = len(body) - _PREFIX.size - manifest_size
    if payload_bytes % _FLOAT.itemsize:
        raise CheckpointError(f"Checkpoint payload of {payload_bytes} bytes is not a whole number of float64 values")
    payload = np.frombuffer(body, dtype=_FLOAT, offset=_PREFIX.size + manifest_size)
    offset = 0

    def take(shape) -> np.ndarray:
        nonlocal offset
        size = int(np.prod(shape, dtype=np.int64))
        if offset + size > payload.size:
            raise CheckpointError("Checkpoint payload is shorter than its manifest")
        chunk = payload[offset : offset + size].astype(np.float64).reshape(shape)
        offset += size
        return chunk

    checkpoint = Checkpoint(meta=manifest.get("meta", {}))
    for name, layers in manifest["nets"].items():
        checkpoint.nets[name] = DenseNet(
            [
                DenseLayer(take((layer["out"], layer["in"])), take((layer["out"],)), Activation(layer["activation"]))
                for layer in layers
            ]
        )
    for name, entry in manifest["optimizers"].items():
        shapes = [tuple(shape) for shape in entry["shapes"]]
        first = [take(shape) for shape in shapes]
        second = [take(shape) for shape in shapes]
        checkpoint.optimizers[name] = AdamState(
            first,
            second,
            learning_rate=entry["learning_rate"],
            beta1=entry["beta1"],
            beta2=entry["beta2"],
            eps=entry["eps"],
            step=entry["step"],
            name=name,
        )
    for name, shape in manifest["arrays"].items():
        checkpoint.arrays[name] = take(tuple(shape))
    if offset != payload.size:
        raise CheckpointError(f"Checkpoint payload has {payload.size - offset} unexpected trailing values")
    return checkpoint


def save_checkpoint(checkpoint: Checkpoint, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(serialize(checkpoint))
    tmp.replace(path)
    logger.info(f"Checkpoint written to {path}")


def load_checkpoint(path: str | Path, expected_manifest: dict | None = None) -> Checkpoint:
    logger.info(f"Loading checkpoint from {path}")
    return deserialize(Path(path).read_bytes(), expected_manifest)
