"""Seed handling: one integer seed, many independent named streams."""

from __future__ import annotations

import hashlib
import os

import numpy as np

SEED_ENV = "COLORENERGY_SEED"


def _name_key(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "little")


def stream(seed: int, name: str = "") -> np.random.Generator:
    """Generator for the named stream derived from ``seed``.

    Streams with different names are statistically independent; the same
    ``(seed, name)`` pair always yields the same sequence.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(_name_key(name),))
    return np.random.default_rng(ss)


def as_generator(seed, name: str = "") -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return stream(0 if seed is None else seed, name)


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))
