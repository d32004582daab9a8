"""Deterministic random-number streams.

All randomness in the package flows through numpy's Philox4x64 counter-based
bit generator.  A stream is addressed by a 64-bit user seed plus a "path" of
small integers (a tag and optional indices such as a mode number or a
replication index).  The path is folded into the second Philox key word with
a splitmix64 chain, so streams for distinct paths are statistically
independent, and adding modes or replications never perturbs existing
streams.  The generator algorithm is pinned (Philox4x64, numpy
implementation), which makes every sampler in this package bit-reproducible
for a given (seed, path).
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# stream tags; one per independent consumer of randomness
TAG_MODE = 1           # per-mode OU simulation (simulate_modes)
TAG_SECTION_MODES = 2  # modal block of the fixed-time sampler
TAG_SECTION_TAIL = 3   # spectral-tail completion of the fixed-time sampler
TAG_TIME_SECTION = 4   # streaming fixed-point time-section sampler
TAG_SPACETIME_TAIL = 5  # spectral-tail completion of the space-time sampler
TAG_FBM = 6
TAG_BROWNIAN = 7
TAG_SMOOTH = 8         # reserved; smooth perturbations are deterministic
TAG_REPLICATION = 9    # replication seeds in the Monte Carlo harness


def splitmix64(z: int) -> int:
    """One splitmix64 scramble round (Steele, Lea & Flood 2014)."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_key(*path: int) -> int:
    """Fold a path of integers into a single 64-bit key word."""
    h = _GOLDEN
    for p in path:
        h = splitmix64(h ^ (int(p) & _MASK64))
    return h


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream addressed by ``(seed, *path)``.

    The user seed occupies the first Philox key word verbatim; the folded
    path occupies the second, so all substreams of one seed live in disjoint
    key space.
    """
    key = np.array([int(seed) & _MASK64, stream_key(*path)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(seed: int, *path: int) -> int:
    """A 64-bit seed for a child experiment (e.g. one replication).

    Children derived with distinct paths are independent of each other and
    of all direct substreams of ``seed`` (child streams scramble the first
    key word, direct substreams keep it verbatim).
    """
    h = stream_key(*path)
    return splitmix64((int(seed) & _MASK64) ^ h)
