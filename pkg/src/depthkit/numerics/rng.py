"""Seeded, splittable random streams."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RandomSource:
    """A (seed, stream) pair naming one reproducible random stream.

    Streams are derived with numpy's SeedSequence spawn keys and fed to the
    PCG64 bit generator, so the same pair yields the same numbers on every
    platform numpy supports.
    """

    seed: int = 0
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "stream", tuple(int(s) for s in self.stream))

    def split(self, *key: int) -> "RandomSource":
        """Child stream; independent of the parent and of other keys."""
        return RandomSource(self.seed, self.stream + tuple(int(k) for k in key))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    """Accept a RandomSource, a Generator, an int seed or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RandomSource):
        return rng.generator()
    if rng is None:
        return RandomSource(0).generator()
    return RandomSource(int(rng)).generator()


def uniform_sphere_directions(rng, d: int, k: int) -> np.ndarray:
    """``k`` directions drawn uniformly on the unit sphere in R^d (rows).

    Each row is a normalised standard Gaussian vector. Zero draws, which have
    probability zero, are redrawn.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    gen = as_generator(rng)
    out = gen.standard_normal((k, d))
    norms = np.linalg.norm(out, axis=1)
    bad = norms == 0
    while bad.any():
        out[bad] = gen.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(out, axis=1)
        bad = norms == 0
    return out / norms[:, None]


def uniform_sphere_direction(rng, d: int) -> np.ndarray:
    """One direction drawn uniformly on the unit sphere in R^d."""
    return uniform_sphere_directions(rng, d, 1)[0]
