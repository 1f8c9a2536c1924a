"""Random words and uniform random Lyndon words.

Every generator is a numpy ``Generator`` over ``PCG64`` seeded from a
``SeedSequence(seed, spawn_key=(stream,))``, so ``(seed, stream)`` pins the
output bit-for-bit and streams are statistically independent.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .words import Word

GENERATOR_NAME = "numpy.PCG64/SeedSequence"


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def sample_word(n: int, q: int, rng: np.random.Generator) -> Word:
    """Uniform word of length ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Word._wrap(rng.integers(0, q, size=n, dtype=np.uint8), q)


def sample_word_geometric(n: int, q: int, rng: np.random.Generator) -> Word:
    """Uniform word built run by run.

    Run lengths are i.i.d. geometric with success probability ``(q-1)/q``;
    the first run letter is uniform and each later one is uniform among the
    ``q-1`` letters differing from its predecessor. The result is truncated
    to ``n`` letters.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    # n runs of length >= 1 always cover n letters
    z = rng.geometric((q - 1) / q, size=n)
    k = int(np.searchsorted(np.cumsum(z), n)) + 1
    z = z[:k]
    steps = rng.integers(1, q, size=k)
    steps[0] = rng.integers(0, q)
    letters = np.cumsum(steps) % q
    return Word._wrap(np.repeat(letters, z)[:n].astype(np.uint8), q)


def lyndon_batch(n: int, q: int, count: int, rng: np.random.Generator
                 ) -> tuple[np.ndarray, int]:
    """``count`` i.i.d. uniform Lyndon words as rows of a ``uint8`` matrix.

    Non-primitive draws are rejected and redrawn; returns the matrix and the
    total number of rejections.
    """
    if n < 1 or count < 0:
        raise ValueError("need n >= 1 and count >= 0")
    out = np.empty((count, n), dtype=np.uint8)
    todo = np.arange(count)
    rejected = 0
    while todo.size:
        raw = rng.integers(0, q, size=(todo.size, n), dtype=np.uint8)
        rot = np.empty_like(raw)
        ok = _kernels.canonicalize_rows(raw, rot)
        out[todo[ok]] = rot[ok]
        rejected += int((~ok).sum())
        todo = todo[~ok]
    return out, rejected


def sample_lyndon(n: int, q: int, rng: np.random.Generator) -> Word:
    """Uniform Lyndon word: draw uniform words until primitive, then rotate."""
    out = np.empty((1, n), dtype=np.uint8)
    while True:
        raw = rng.integers(0, q, size=(1, n), dtype=np.uint8)
        if _kernels.canonicalize_rows(raw, out)[0]:
            return Word._wrap(out[0], q)
