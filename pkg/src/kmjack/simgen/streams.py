"""Deterministic random streams.

Replication ``r`` of study cell ``c`` draws from a PCG64 generator seeded by
``SeedSequence(master_seed, spawn_key=(*c, r, stream))``, so results do not
depend on which worker ran which replication. A cell is identified by its
grid coordinates (e.g. ``(n, p_percent)``), not by its position in the grid.
"""

from collections.abc import Sequence

import numpy as np


def replication_rng(
    master_seed: int, cell: int | Sequence[int], replication: int, stream: int = 0
) -> np.random.Generator:
    key = (cell,) if isinstance(cell, (int, np.integer)) else tuple(cell)
    sequence = np.random.SeedSequence(master_seed, spawn_key=(*key, replication, stream))
    return np.random.Generator(np.random.PCG64(sequence))


def as_generator(seed) -> np.random.Generator:
    """Accept a ``Generator`` as is, or seed a new one."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
