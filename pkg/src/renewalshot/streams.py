"""Reproducible RNG substreams for parallel Monte Carlo.

Every logical unit of work (a replicate, a reference batch, ...) gets its
own counter-based Philox stream derived from a master seed and an integer
key path.  Streams are independent of worker count and scheduling order,
so results keyed by replicate index are bit-reproducible under any degree
of parallelism.
"""

from __future__ import annotations

import numpy as np

# Domain tags keep replicate streams, reference streams etc. disjoint.
DOMAIN_REPLICATE = 1
DOMAIN_REFERENCE = 2
DOMAIN_AUX = 3


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Return a Philox generator for the given (seed, key path)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))
