"""Deterministic seeding for Monte Carlo experiments.

Per-trial streams are derived from a 64-bit master seed with splitmix64:
``trial_seed = splitmix64(master_seed XOR splitmix64(trial_index))``.  The
stream itself is numpy's PCG64.  Reruns with the same master seed are
bit-identical within one build; no cross-language reproducibility is
promised.  Trials may therefore run in any order (or in parallel) without
changing results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64(x: int) -> int:
    """One splitmix64 scrambling step of a 64-bit integer."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(master_seed: int, index: int) -> int:
    """Derive the sub-seed for trial ``index`` from ``master_seed``."""
    return splitmix64((master_seed & _MASK64) ^ splitmix64(index & _MASK64))


def stream(seed: int) -> np.random.Generator:
    """A fresh PCG64 generator for the given 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def trial_stream(master_seed: int, index: int) -> np.random.Generator:
    """Generator for trial ``index`` of an experiment with ``master_seed``."""
    return stream(mix_seed(master_seed, index))
