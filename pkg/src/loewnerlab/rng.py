"""Counter-based random number generation.

All randomness in the package flows through Philox generators keyed by a
64-bit scenario seed.  Independent streams (replicas, refinement noise) are
obtained with ``jumped``, so replica-level parallelism is deterministic.
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_generator", "parse_seed"]


def make_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Return a Philox generator for the given seed and stream index."""
    bg = np.random.Philox(key=np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    if stream:
        bg = bg.jumped(stream)
    return np.random.Generator(bg)


def parse_seed(text) -> int:
    """Parse a seed given as a decimal or 0x-prefixed hexadecimal string."""
    if isinstance(text, (int, np.integer)):
        return int(text)
    return int(str(text).strip(), 0)
