"""Reproducible, independent random streams.

Every stream is a numpy PCG64 generator seeded from
``SeedSequence(master_seed, spawn_key=(crc32(stream_id), replication))``.
The same triple always yields the same sequence, and distinct triples
give statistically independent streams.
"""

from __future__ import annotations

import zlib

import numpy as np


def stream_code(stream_id: str) -> int:
    return zlib.crc32(stream_id.encode("utf-8"))


class RandomStream:
    def __init__(self, stream_id: str, replication: int, master_seed: int):
        if replication < 0 or master_seed < 0:
            raise ValueError("replication index and master seed must be non-negative")
        self.stream_id = stream_id
        self.replication = int(replication)
        self.master_seed = int(master_seed)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(stream_code(stream_id), self.replication))
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def __repr__(self) -> str:
        return f"RandomStream({self.stream_id!r}, rep={self.replication}, seed={self.master_seed})"

    def random(self, size=None):
        return self.generator.random(size)

    def uniform(self, low: float, high: float, size=None):
        return self.generator.uniform(low, high, size)

    def exponential(self, mean: float = 1.0, size=None):
        return self.generator.exponential(mean, size)

    def choice(self, n: int, size=None, p=None):
        return self.generator.choice(n, size=size, p=p)


class StreamFactory:
    """Hands out named streams for one replication."""

    def __init__(self, master_seed: int, replication: int):
        self.master_seed = int(master_seed)
        self.replication = int(replication)

    def __call__(self, stream_id: str) -> RandomStream:
        return RandomStream(stream_id, self.replication, self.master_seed)
