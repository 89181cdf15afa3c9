"""Named, collision-free random substreams derived from one master seed.

Every consumer of randomness (graph sampling, recommender draws, chain
transitions, ...) gets its own generator keyed by a label path, so adding
a new consumer never shifts the draws seen by existing ones.
"""

from __future__ import annotations

import hashlib

import numpy as np


def child_seed(seed: int, *labels: object) -> int:
    """Derive a stable 64-bit seed from a master seed and a label path."""
    h = hashlib.sha256()
    h.update(str(int(seed)).encode("ascii"))
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "little")


def substream(seed: int, *labels: object) -> np.random.Generator:
    """Independent generator for the given label path under ``seed``."""
    return np.random.default_rng(child_seed(seed, *labels))
