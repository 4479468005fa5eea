"""Checkpoint file format.

Layout: 8-byte magic, a little-endian uint32 manifest length, a JSON
manifest (format version, family, full architecture config, the named
array list with shapes, plus free-form run metadata), then the raw
array payload: every array as little-endian 32-bit floats, concatenated
in manifest order. Float32 weights round-trip bit-exactly; int64
counters (batch-norm bookkeeping) are stored as float32, which is exact
below 2**24.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from .build import build_model
from .config import NetworkConfig

MAGIC = b"VZCKPT01"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Unreadable or malformed checkpoint file."""


@dataclass
class CheckpointInfo:
    config: NetworkConfig
    meta: dict
    extra_arrays: dict = field(default_factory=dict)
    n_parameters: int = 0


def save_checkpoint(model, path, meta: dict | None = None,
                    extra_arrays: dict[str, np.ndarray] | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    params = {name for name, _ in model.named_parameters()}
    arrays: list[tuple[str, str, np.ndarray]] = []
    for name, tensor in model.state_dict().items():
        kind = "param" if name in params else "buffer"
        arrays.append((name, kind, tensor.detach().cpu().numpy()))
    for name, arr in (extra_arrays or {}).items():
        arrays.append((name, "extra", np.asarray(arr)))

    entries = []
    blobs = []
    for name, kind, arr in arrays:
        entries.append({
            "name": name,
            "kind": kind,
            "shape": list(arr.shape),
            "dtype": str(arr.dtype),
        })
        blobs.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())

    manifest = {
        "format_version": FORMAT_VERSION,
        "family": model.config.family.value,
        "config": model.config.to_dict(),
        "arrays": entries,
        "meta": meta or {},
    }
    payload = json.dumps(manifest).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(payload)))
        f.write(payload)
        for blob in blobs:
            f.write(blob)


def read_manifest(path) -> dict:
    try:
        with open(path, "rb") as f:
            magic = f.read(8)
            if magic != MAGIC:
                raise CheckpointError(f"{path}: not a checkpoint (bad magic)")
            (length,) = struct.unpack("<I", f.read(4))
            manifest = json.loads(f.read(length).decode("utf-8"))
    except (OSError, struct.error, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"{path}: cannot read checkpoint ({e})") from e
    if manifest.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported format version "
                              f"{manifest.get('format_version')}")
    return manifest


def manifest_parameter_count(manifest: dict) -> int:
    total = 0
    for entry in manifest["arrays"]:
        if entry["kind"] == "param":
            n = 1
            for s in entry["shape"]:
                n *= s
            total += n
    return total


def load_checkpoint(path) -> tuple[torch.nn.Module, CheckpointInfo]:
    manifest = read_manifest(path)
    config = NetworkConfig.from_dict(manifest["config"])
    model = build_model(config, seed=0)

    state = {}
    extras = {}
    with open(path, "rb") as f:
        f.seek(8)
        (length,) = struct.unpack("<I", f.read(4))
        f.seek(8 + 4 + length)
        for entry in manifest["arrays"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = f.read(4 * count)
            if len(raw) != 4 * count:
                raise CheckpointError(f"{path}: truncated array {entry['name']}")
            arr = np.frombuffer(raw, dtype="<f4").reshape(shape)
            if entry["kind"] == "extra":
                extras[entry["name"]] = arr.astype(entry["dtype"])
            else:
                state[entry["name"]] = torch.from_numpy(
                    arr.astype(entry["dtype"], copy=True))
    missing = set(model.state_dict()) - set(state)
    if missing:
        raise CheckpointError(f"{path}: missing arrays {sorted(missing)}")
    model.load_state_dict(state)
    info = CheckpointInfo(config=config, meta=manifest.get("meta", {}),
                          extra_arrays=extras,
                          n_parameters=manifest_parameter_count(manifest))
    return model, info
