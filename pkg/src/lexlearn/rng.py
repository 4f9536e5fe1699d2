"""Deterministic random-stream derivation.

Every randomized subroutine draws from a generator derived from an integer
key path (seed, utterance index, role, ...).  Two runs with the same key path
see the same stream, no matter how work is scheduled.
"""

from __future__ import annotations

import numpy as np

# Role tags.  Key layout is (seed, utterance_counter, role, ...); the final
# cleanup pass uses utterance slot 0, which normal processing never does.
ROLE_FIRST_PARSE = 1
ROLE_FIXES = 2
ROLE_REPARSE = 3
ROLE_GC = 4
ROLE_REDUCE = 5


def stream(*key: int) -> np.random.Generator:
    """Return a fresh generator for the given key path."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))
