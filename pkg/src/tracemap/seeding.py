"""Labeled seed derivation.

Every random stream in the package is derived from one master seed plus a
purpose label and integer indices, so results never depend on the order in
which realizations or sweep points are scheduled.
"""

from __future__ import annotations

import zlib

import numpy as np


def _label(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8"))


def seed_sequence(master: int, purpose: str, *index: int) -> np.random.SeedSequence:
    if master < 0:
        raise ValueError(f"seed must be non-negative, got {master}")
    return np.random.SeedSequence(
        entropy=int(master), spawn_key=(_label(purpose), *(int(i) for i in index))
    )


def derive_rng(master: int, purpose: str, *index: int) -> np.random.Generator:
    """Independent generator for ``(master, purpose, *index)``."""
    return np.random.default_rng(seed_sequence(master, purpose, *index))


def derive_seed(master: int, purpose: str, *index: int) -> int:
    """Integer child seed, for APIs that take a plain seed."""
    return int(seed_sequence(master, purpose, *index).generate_state(1, np.uint32)[0])

