"""Counter-based random substreams for reproducible, schedule-independent
Monte Carlo.

A stream is a (seed, path) pair; children extend the path.  The Philox key is
derived by hashing the pair, so any two distinct paths yield statistically
independent generators and parallel workers never share state.  Identical
(seed, path) always reproduce identical draws.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

_DOMAIN = b"kplane-audit/substream/1"

# Fixed Monte Carlo chunk size: estimates are sums over per-chunk draws in
# chunk order, so the result is independent of how chunks are scheduled.
CHUNK = 1 << 16


@dataclass(frozen=True)
class SeededStream:
    seed: int
    path: tuple[int, ...] = field(default_factory=tuple)

    def child(self, index: int) -> "SeededStream":
        return SeededStream(self.seed, self.path + (int(index),))

    def key(self) -> bytes:
        h = hashlib.sha256()
        h.update(_DOMAIN)
        h.update(int(self.seed).to_bytes(8, "little", signed=False))
        h.update(len(self.path).to_bytes(4, "little"))
        for p in self.path:
            h.update(int(p).to_bytes(8, "little", signed=True))
        return h.digest()

    def generator(self) -> np.random.Generator:
        key = np.frombuffer(self.key()[:16], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def chunk_sizes(n: int, chunk: int = CHUNK) -> list[int]:
    """Split n draws into fixed-size chunks (last one ragged)."""
    if n < 0:
        raise ValueError(f"sample count must be >= 0, got {n}")
    sizes = [chunk] * (n // chunk)
    if n % chunk:
        sizes.append(n % chunk)
    return sizes
