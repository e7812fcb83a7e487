"""``clinrisk.utils.streams``: Seeded, counter-based random streams.

Every source of randomness in a run is a :class:`numpy.random.Generator` over the
``Philox`` counter-based bit generator, keyed by the run seed and a fixed stream id.
Draws therefore depend only on ``(seed, stream, *keys)`` and never on thread or
process scheduling.
"""

from enum import IntEnum

import numpy as np

MAX_SEED = 2**64 - 1


class Stream(IntEnum):
    """Fixed purpose identifiers for random streams."""

    DATA = 0
    NOISE = 1
    INIT = 2
    BATCHES = 3
    AUGMENT = 4
    MIXUP = 5
    MATRIX = 6


def check_seed(seed: int) -> int:
    """Validate a 64-bit unsigned seed."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"Seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) <= MAX_SEED:
        raise ValueError(f"Seed {seed} is not a 64-bit unsigned integer")
    return int(seed)


def seed_sequence(seed: int, stream: Stream, *keys: int) -> np.random.SeedSequence:
    """Seed sequence for ``stream`` (and optional integer sub-keys) of ``seed``."""
    return np.random.SeedSequence(
        check_seed(seed), spawn_key=(int(stream), *map(int, keys))
    )


def make_rng(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """Philox-backed generator for ``stream`` of ``seed``.

    Args:
        seed: 64-bit unsigned run seed.
        stream: Purpose of the stream.
        keys: Additional sub-stream keys (e.g. network index, matrix cell).
    """
    return np.random.Generator(np.random.Philox(seed_sequence(seed, stream, *keys)))


def derive_seed(seed: int, stream: Stream, *keys: int) -> int:
    """Derive an independent 64-bit seed from ``seed`` for ``stream``."""
    return int(seed_sequence(seed, stream, *keys).generate_state(1, np.uint64)[0])


__doc_title__ = "Random Streams"
__all__ = ["Stream", "check_seed", "seed_sequence", "make_rng", "derive_seed"]
