"""Deterministic seed derivation shared by every simulator.

All randomness flows from a single master seed.  Child seeds are a stable
64-bit hash (SHA-256 truncation) of the master seed plus a tag path, e.g.
``derive_seed(master, "grant_free", frame_chunk)``.  The derivation is pure
arithmetic on the canonical byte encoding of the parts, so it reproduces
across processes, platforms and worker counts; this is what makes
``--jobs 1`` and ``--jobs 4`` byte-identical.
"""

from __future__ import annotations

import hashlib

import numpy as np

MAX_SEED = 2**64


def derive_seed(master: int, *parts: int | str) -> int:
    """Stable 64-bit child seed from a master seed and a tag path."""
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    for part in parts:
        h.update(b"|")
        if isinstance(part, str):
            h.update(b"s:" + part.encode())
        else:
            h.update(b"i:" + str(int(part)).encode())
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(master: int, *parts: int | str) -> np.random.Generator:
    """PCG64 generator seeded with :func:`derive_seed` of the tag path."""
    return np.random.default_rng(derive_seed(master, *parts))
