"""Counter-based random streams keyed by experiment coordinates."""

from __future__ import annotations

import numpy as np

MASK_STREAM = 1
NOISE_STREAM = 2
PERTURBATION_STREAM = 3
ENSEMBLE_STREAM = 4

_UINT64 = (1 << 64) - 1


def keyed_generator(seed: int, *keys: int) -> np.random.Generator:
    """Philox generator that depends only on (seed, keys).

    The same coordinates always give the same stream, regardless of the order
    in which streams are requested.
    """
    entropy = [int(seed) & _UINT64, *(int(k) & _UINT64 for k in keys)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))
