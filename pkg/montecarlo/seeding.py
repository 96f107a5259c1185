"""Per-purpose random substreams derived from one master seed.

Each consumer asks for ``(purpose, index)``; the child seed is a SplitMix64
mix of the master seed, a 64-bit digest of the purpose name and the index.
Adding a new consumer never changes the seeds of existing ones.
"""

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One step of the SplitMix64 output function."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def purpose_code(purpose: str) -> int:
    digest = hashlib.blake2b(purpose.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(master: int, purpose: str, index: int = 0) -> int:
    """64-bit child seed for the ``index``-th stream of ``purpose``."""
    state = splitmix64(master & MASK64)
    state = splitmix64(state ^ purpose_code(purpose))
    return splitmix64(state ^ (index & MASK64))


def generator(master: int, purpose: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, purpose, index))


class SeedStream:
    """Master seed plus named substreams."""

    def __init__(self, master: int):
        if master < 0:
            raise ValueError(f"seed must be non-negative, got {master}")
        self._master = int(master) & MASK64

    @property
    def master(self) -> int:
        return self._master

    def seed(self, purpose: str, index: int = 0) -> int:
        return derive_seed(self._master, purpose, index)

    def generator(self, purpose: str, index: int = 0) -> np.random.Generator:
        return generator(self._master, purpose, index)
