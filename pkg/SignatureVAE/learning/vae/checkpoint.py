"""Model checkpoint and loss history files.

Checkpoint layout (all integers little-endian u32, all reals little-endian
float64)::

    b"SVAE" | version | len(config) | config JSON | adam step t |
    weight blocks | first moments | second moments

Each block is ``ndim | dims... | data`` in row-major order, and blocks
appear in ``PARAM_BLOCKS`` order. A ``<checkpoint>.json`` sidecar holds the
config and the final loss breakdown.
"""
import csv
import json
import os
import struct

import numpy as np

from ...utils import fmt_float, write_json
from .params import PARAM_BLOCKS, VaeConfig, VaeParams
from .vae import LossBreakdown

MAGIC = b"SVAE"
VERSION = 1
HISTORY_HEADER = ("epoch", "recon", "kl", "beta_effective", "total")


class CheckpointError(ValueError):
    """Raised for unreadable or inconsistent checkpoint files."""


def _u32(value):
    return struct.pack("<I", value)


def _block_bytes(arr):
    arr = np.ascontiguousarray(arr, dtype="<f8")
    head = _u32(arr.ndim) + b"".join(_u32(d) for d in arr.shape)
    return head + arr.tobytes(order="C")


def checkpoint_bytes(params: VaeParams) -> bytes:
    config = json.dumps(params.config.to_dict(), sort_keys=True).encode("utf-8")
    parts = [MAGIC, _u32(VERSION), _u32(len(config)), config, _u32(params.t)]
    for part in (params.weights, params.m, params.v):
        parts.extend(_block_bytes(part[name]) for name in PARAM_BLOCKS)
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n):
        if self.offset + n > len(self.data):
            raise CheckpointError(
                "Checkpoint truncated at byte %d (need %d more bytes)"
                % (self.offset, n)
            )
        chunk = self.data[self.offset:self.offset + n]
        self.offset += n
        return chunk

    def u32(self):
        return struct.unpack("<I", self.take(4))[0]

    def block(self, expected_shape, name):
        ndim = self.u32()
        shape = tuple(self.u32() for _ in range(ndim))
        if shape != tuple(expected_shape):
            raise CheckpointError(
                "Block %r has shape %s, config expects %s"
                % (name, shape, tuple(expected_shape))
            )
        n = int(np.prod(shape, dtype=np.int64))
        raw = self.take(8 * n)
        return np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(shape)


def params_from_bytes(data: bytes) -> VaeParams:
    reader = _Reader(data)
    if reader.take(4) != MAGIC:
        raise CheckpointError("Not an SVAE checkpoint (bad magic)")
    version = reader.u32()
    if version != VERSION:
        raise CheckpointError("Unsupported checkpoint version %d" % version)
    config = VaeConfig.from_dict(json.loads(reader.take(reader.u32()).decode("utf-8")))
    t = reader.u32()
    shapes = config.block_shapes()
    parts = []
    for _ in range(3):
        parts.append({name: reader.block(shapes[name], name) for name in PARAM_BLOCKS})
    if reader.offset != len(data):
        raise CheckpointError(
            "%d trailing bytes after the last block" % (len(data) - reader.offset)
        )
    return VaeParams(config, parts[0], parts[1], parts[2], t)


def sidecar_path(path):
    return str(path) + ".json"


def save_checkpoint(path, params: VaeParams, history=None):
    """Write the binary checkpoint and its JSON sidecar.

    Returns the two written paths.
    """
    history = list(history or [])
    directory = os.path.dirname(str(path))
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as f:
        f.write(checkpoint_bytes(params))
    sidecar = {
        "config": params.config.to_dict(),
        "epochs_completed": len(history),
        "final_losses": history[-1].to_dict() if history else None,
        "adam_steps": params.t,
    }
    write_json(sidecar_path(path), sidecar)
    return [str(path), sidecar_path(path)]


def load_checkpoint(path) -> VaeParams:
    with open(path, "rb") as f:
        return params_from_bytes(f.read())


def write_history_csv(path, history):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(HISTORY_HEADER)
        for entry in history:
            writer.writerow(
                [str(entry.epoch)]
                + [fmt_float(getattr(entry, k)) for k in HISTORY_HEADER[1:]]
            )
    return path


def read_history_csv(path):
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = tuple(next(reader, ()))
        if header != HISTORY_HEADER:
            raise ValueError(
                "Expected history header %s, got %s"
                % (",".join(HISTORY_HEADER), ",".join(header))
            )
        return [
            LossBreakdown(int(row[0]), *(float(v) for v in row[1:]))
            for row in reader
            if row
        ]
