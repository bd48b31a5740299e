"""Deterministic, cross-platform random streams.

All randomness in the package flows through Philox counter-based generators
keyed by a SHA-256 hash of (seed, *tags).  Distinct tag tuples give
independent streams, so instance generation and solver-local randomness can
be parallelized without coordination while staying byte-reproducible.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key_words(seed: int, tags: tuple) -> np.ndarray:
    h = hashlib.sha256()
    h.update(str(int(seed)).encode())
    for tag in tags:
        h.update(b"\x1f")
        h.update(str(tag).encode())
    digest = h.digest()
    return np.frombuffer(digest[:16], dtype=np.uint64)


def stream(seed: int, *tags) -> np.random.Generator:
    """Return an independent Generator for (seed, tags)."""
    return np.random.Generator(np.random.Philox(key=_key_words(seed, tags)))


def solver_seed(dataset_seed: int, solver_id: str, instance_id: str) -> int:
    """Stable 63-bit seed for a solver run on one instance."""
    words = _key_words(dataset_seed, ("solver", solver_id, instance_id))
    return int(words[0] & np.uint64(0x7FFF_FFFF_FFFF_FFFF))
