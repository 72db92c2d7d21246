"""Grid interpolation and sampling helpers shared by the perceiver tables."""
import logging
from typing import Protocol, Sequence, Tuple

import numpy as np

from hapticpen import exceptions

logger = logging.getLogger(__name__)


class UniformSource(Protocol):
    """Anything with a ``random()`` method, e.g. ``numpy.random.Generator``."""

    def random(self) -> float:
        ...


def check_axis(name: str, axis: Sequence[float]) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size < 2:
        raise exceptions.InvalidTableError(
            f"Axis '{name}' needs at least two grid points"
        )
    if not np.all(np.isfinite(axis)) or np.any(np.diff(axis) <= 0):
        raise exceptions.InvalidTableError(
            f"Axis '{name}' must be finite and strictly increasing"
        )
    return axis


def _bracket(axis: np.ndarray, value: float) -> Tuple[int, float]:
    value = min(max(value, axis[0]), axis[-1])
    index = int(np.searchsorted(axis, value, side="right")) - 1
    index = min(max(index, 0), axis.size - 2)
    fraction = (value - axis[index]) / (axis[index + 1] - axis[index])
    return index, fraction


def bilinear(
    x_axis: np.ndarray, y_axis: np.ndarray, values: np.ndarray, x: float, y: float
) -> np.ndarray:
    """Bilinear interpolation of ``values[i, j, ...]`` at ``(x, y)``.

    Points outside the grid are clamped to its hull.
    """
    i, fx = _bracket(x_axis, x)
    j, fy = _bracket(y_axis, y)
    return (
        (1 - fx) * (1 - fy) * values[i, j]
        + fx * (1 - fy) * values[i + 1, j]
        + (1 - fx) * fy * values[i, j + 1]
        + fx * fy * values[i + 1, j + 1]
    )


def draw_index(probabilities: Sequence[float], rng: UniformSource) -> int:
    """Inverse-CDF draw: consumes exactly one ``rng.random()``."""
    u = rng.random()
    cumulative = 0.0
    for index, p in enumerate(probabilities):
        cumulative += p
        if u < cumulative:
            return index
    # Round-off in the cumulative sum; fall back to the last label with mass.
    return max(i for i, p in enumerate(probabilities) if p > 0)


def draw_bernoulli(p: float, rng: UniformSource) -> bool:
    return rng.random() < p
