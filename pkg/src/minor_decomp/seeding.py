"""Deterministic RNG derivation.

Every random choice in the package flows from a single 64-bit root seed.
Stages and repeated draws derive child generators from (root, labels...)
so that results are reproducible independent of call order or parallelism:
the label path fully determines the stream.

Labels are hashed with SHA-256, so derived seeds are stable across
platforms and Python versions (unlike the builtin ``hash``).
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_entropy(label) -> int:
    if isinstance(label, (int, np.integer)):
        data = b"i" + int(label).to_bytes(16, "little", signed=True)
    else:
        data = b"s" + str(label).encode("utf-8")
    return int.from_bytes(hashlib.sha256(data).digest()[:16], "little")


def derive_seed_sequence(root_seed: int, *labels) -> np.random.SeedSequence:
    entropy = [int(root_seed) & 0xFFFFFFFFFFFFFFFF]
    entropy.extend(_label_entropy(lab) for lab in labels)
    return np.random.SeedSequence(entropy)


def derive_rng(root_seed: int, *labels) -> np.random.Generator:
    """Child generator for (root_seed, labels...); same args, same stream."""
    return np.random.Generator(np.random.PCG64(derive_seed_sequence(root_seed, *labels)))
