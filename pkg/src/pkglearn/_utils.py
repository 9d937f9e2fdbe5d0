"""Seed derivation, hashing, and small shared helpers."""

from __future__ import annotations

import hashlib
import json

import numpy as np


def derive_rng(seed: int, *keys) -> np.random.Generator:
    """Return a PCG64 generator for an independent, reproducible stream.

    The stream is a pure function of ``seed`` and the given keys (ints or
    strings), so concurrent pipeline stages never share RNG state.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for key in keys:
        if isinstance(key, str):
            digest = hashlib.sha256(key.encode("utf-8")).digest()
            entropy.append(int.from_bytes(digest[:8], "little"))
        else:
            entropy.append(int(key) & 0xFFFFFFFFFFFFFFFF)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def canonical_json(obj) -> str:
    """JSON with sorted keys and no whitespace, stable across runs."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
