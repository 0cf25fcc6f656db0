"""Deterministic random-number streams.

Every randomized operation in this package draws from NumPy's PCG64
generator, seeded through ``SeedSequence`` with a composite integer key.
The key convention is the reproducibility contract:

* uniform graph sampling:      ``(seed,)``
* one-node-per-graph policy:   ``(seed,)``, one draw per graph in shard order
* class-balanced sampling:     ``(seed, class_id)``, one stream per bin
* bootstrap repeats:           ``(seed, k, repeat_index)``, one stream per repeat

Streams derived from distinct keys are statistically independent, so
per-bin and per-repeat work can run in parallel without changing results.
"""

from __future__ import annotations

import numpy as np


def stream(*key: int) -> np.random.Generator:
    """Return a PCG64 generator for a composite integer key.

    All key parts must be non-negative; ``stream(a, b)`` and ``stream(a)``
    followed by extra draws are unrelated streams.
    """
    if not key:
        raise ValueError("stream key must have at least one part")
    for part in key:
        if part < 0:
            raise ValueError(f"stream key parts must be non-negative, got {part}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(list(key))))
