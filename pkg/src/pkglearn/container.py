"""Flat binary container for numeric graphs and model checkpoints.

Layout: the magic line ``PKGL1``, an 8-byte little-endian header length,
a canonical JSON header, then the raw array payloads concatenated in
header order (little-endian, C-contiguous).  Writes are byte-deterministic
for identical content, which the pipeline's idempotence contract relies on.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from ._utils import canonical_json
from .exceptions import ValidationError

MAGIC = b"PKGL1\n"

_DTYPES = {"int64": "<i8", "float64": "<f8"}


def write_container(path, meta: dict, arrays: list) -> None:
    """Write ``meta`` plus named arrays; array dtypes must be int64/float64."""
    entries = []
    payloads = []
    for name, arr in arrays:
        arr = np.asarray(arr)
        if arr.dtype == np.int64:
            dtype = "int64"
        elif arr.dtype == np.float64:
            dtype = "float64"
        else:
            raise ValidationError(f"array {name!r} has unsupported dtype {arr.dtype}")
        entries.append({"name": name, "dtype": dtype, "shape": list(arr.shape)})
        payloads.append(np.ascontiguousarray(arr).astype(_DTYPES[dtype]).tobytes())
    header = canonical_json({**meta, "arrays": entries}).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for payload in payloads:
            fh.write(payload)


def read_container(path) -> tuple[dict, dict]:
    """Return (meta, {name: array}) for a container file."""
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ValidationError(f"{path}: not a pkglearn container")
        (header_len,) = struct.unpack("<Q", fh.read(8))
        meta = json.loads(fh.read(header_len).decode("utf-8"))
        arrays = {}
        for entry in meta.pop("arrays"):
            count = int(np.prod(entry["shape"], dtype=np.int64)) if entry["shape"] else 1
            dtype = np.dtype(_DTYPES[entry["dtype"]])
            raw = fh.read(count * dtype.itemsize)
            if len(raw) != count * dtype.itemsize:
                raise ValidationError(f"{path}: truncated array {entry['name']!r}")
            arrays[entry["name"]] = np.frombuffer(raw, dtype=dtype).reshape(entry["shape"]).copy()
    return meta, arrays
