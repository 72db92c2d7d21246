"""Stratified latent uniforms for simulated responses.

Each simulated participant answers from a fixed vector of latent uniforms, one
per repetition slot, drawn one per stratum. Trials that share a slot share the
uniform, so differences between cells come from the perceiver tables rather
than from sampling noise.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from hapticpen import exceptions


@dataclass(frozen=True)
class LatentDraw:
    """A fixed uniform in [0, 1) that quacks like a random generator."""

    u: float

    def random(self) -> float:
        return self.u


def stratified_uniforms(rng: np.random.Generator, strata: int) -> np.ndarray:
    """One uniform from each of ``strata`` equal strata of [0, 1), in random
    slot order."""
    if strata < 1:
        raise exceptions.InvalidArgumentError(f"Need at least one stratum, got {strata}")
    u = (np.arange(strata) + rng.random(strata)) / strata
    return u[rng.permutation(strata)]


def paired_stratified_uniforms(
    rng: np.random.Generator, slots: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Two slot vectors from ``2 * slots`` strata.

    The strata come in adjacent pairs; each pair is split at random between
    the two vectors, so both vectors cover [0, 1) evenly.
    """
    if slots < 1:
        raise exceptions.InvalidArgumentError(f"Need at least one slot, got {slots}")
    u = (np.arange(2 * slots) + rng.random(2 * slots)) / (2 * slots)
    low, high = u[0::2], u[1::2]
    swap = rng.random(slots) < 0.5
    first = np.where(swap, high, low)
    second = np.where(swap, low, high)
    order = rng.permutation(slots)
    return first[order], second[order]
