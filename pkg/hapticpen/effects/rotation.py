"""Rotational torque pulse trains and the direction-identification model.

Powering the stylus DC motor with discrete pulses gives a reaction torque on the
casing: in the intended direction while the rotor spins up and in the reverse
direction when it is stopped. How well users identify the intended direction
depends on the on-time, the off-time and the on-time waveform.
"""
import enum
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Sequence, Union

import numpy as np
import pandas as pd

from hapticpen import asserts, exceptions
from hapticpen.effects.perception import (
    UniformSource,
    bilinear,
    check_axis,
    draw_bernoulli,
)
from hapticpen.effects.timeline import (
    ActuationTimeline,
    Channel,
    Pulse,
    WaveformShape,
    snap,
)

logger = logging.getLogger(__name__)

GRID_MS = (25.0, 75.0, 175.0, 275.0, 375.0, 575.0)
_TABLE_COLUMNS = ["shape", "on_ms", "off_ms", "p_correct"]
_MONOTONE_TOLERANCE = 1e-12


class RotationDirection(enum.Enum):
    CW = "cw"
    CCW = "ccw"

    @property
    def polarity(self) -> int:
        return 1 if self is RotationDirection.CW else -1

    @property
    def opposite(self) -> 'RotationDirection':
        return RotationDirection.CCW if self is RotationDirection.CW else RotationDirection.CW


def intended_sign(direction: RotationDirection) -> int:
    """Sign of the casing torque during on-time for ``direction``.

    The casing turns opposite to the rotor, so the sign is ``-polarity``.
    """
    return -direction.polarity


@dataclass(frozen=True)
class RotationSpec:
    """Request for a rotational torque effect.

    Parameters:

        direction --
            RotationDirection.CW or RotationDirection.CCW.

        on_ms --
            On-time of each pulse in ms. Must round to at least one 0.1 ms tick.

        off_ms --
            Off-time after each pulse in ms. Must be >= 0.

        shape --
            On-time waveform. Default: WaveformShape.SQUARE.

        pulse_count --
            Number of pulses. Default: 3.

        amplitude --
            Drive level in (0, 1]. Default: 1.0.
    """

    direction: RotationDirection
    on_ms: float
    off_ms: float
    shape: WaveformShape = WaveformShape.SQUARE
    pulse_count: int = 3
    amplitude: float = 1.0

    def validate(self):
        if not isinstance(self.direction, RotationDirection):
            raise exceptions.InvalidSpecError.for_invariant(
                "RotationSpec", "direction is cw or ccw", self.direction
            )
        if not isinstance(self.shape, WaveformShape):
            raise exceptions.InvalidSpecError.for_invariant(
                "RotationSpec", "shape is square, inc or dec", self.shape
            )
        if not self.on_ms > 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "RotationSpec", "on_ms > 0", self.on_ms
            )
        if not np.isfinite(self.on_ms) or snap(self.on_ms) <= 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "RotationSpec", "on_ms >= tick", self.on_ms
            )
        if not self.off_ms >= 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "RotationSpec", "off_ms >= 0", self.off_ms
            )
        if int(self.pulse_count) != self.pulse_count or self.pulse_count < 1:
            raise exceptions.InvalidSpecError.for_invariant(
                "RotationSpec", "pulse_count >= 1", self.pulse_count
            )
        if not 0 < self.amplitude <= 1:
            raise exceptions.InvalidSpecError.for_invariant(
                "RotationSpec", "0 < amplitude <= 1", self.amplitude
            )

    @property
    def period(self) -> float:
        return self.on_ms + self.off_ms


def schedule_rotation(spec: RotationSpec) -> ActuationTimeline:
    """Builds the motor pulse train of a rotation effect.

    Pulse k occupies ``[k * (on + off), k * (on + off) + on)``; CW pulses have
    polarity +1 and CCW pulses -1. The timeline lasts ``count * (on + off)``.

    Example::

        timeline = schedule_rotation(
            RotationSpec(RotationDirection.CW, 200, 200, WaveformShape.DECREASING_RAMP)
        )
        timeline.total_duration  # 1200.0
    """
    spec.validate()
    on, period = snap(spec.on_ms), snap(spec.period)
    pulses = [
        Pulse(
            snap(k * period), on, spec.amplitude, spec.shape, spec.direction.polarity
        )
        for k in range(int(spec.pulse_count))
    ]
    total = snap(spec.pulse_count * period)
    return ActuationTimeline.build({Channel.MOTOR: pulses}, total)


class RotationPerceptTable:
    """Probability of identifying the intended direction, per waveform shape,
    over an (on_ms, off_ms) grid.

    ``grids[shape][i, j]`` is the probability at ``on_axis[i]`` and
    ``off_axis[j]``. Values must lie in [0.5, 1] and be non-decreasing along
    both axes. The table is identical for CW and CCW.
    """

    def __init__(
        self,
        on_axis: Sequence[float],
        off_axis: Sequence[float],
        grids: Mapping[WaveformShape, Union[Sequence, np.ndarray]],
    ):
        self.on_axis = check_axis("on_ms", on_axis)
        self.off_axis = check_axis("off_ms", off_axis)
        missing = [shape.value for shape in WaveformShape if shape not in grids]
        if missing:
            raise exceptions.InvalidTableError(
                f"Rotation table has no grid for shapes: {', '.join(missing)}"
            )
        expected = (self.on_axis.size, self.off_axis.size)
        self.grids: Dict[WaveformShape, np.ndarray] = {}
        for shape in WaveformShape:
            grid = np.array(grids[shape], dtype=float)
            if grid.shape != expected:
                raise exceptions.InvalidTableError(
                    f"Grid for '{shape.value}' has shape {grid.shape}, "
                    f"expected {expected}"
                )
            if not np.all(np.isfinite(grid)) or np.any((grid < 0.5) | (grid > 1.0)):
                raise exceptions.InvalidTableError(
                    f"Grid for '{shape.value}' has probabilities outside [0.5, 1]"
                )
            if np.any(np.diff(grid, axis=0) < -_MONOTONE_TOLERANCE):
                raise exceptions.InvalidTableError(
                    f"Grid for '{shape.value}' decreases along on_ms"
                )
            if np.any(np.diff(grid, axis=1) < -_MONOTONE_TOLERANCE):
                raise exceptions.InvalidTableError(
                    f"Grid for '{shape.value}' decreases along off_ms"
                )
            grid.setflags(write=False)
            self.grids[shape] = grid

    def __repr__(self):
        return (
            f"RotationPerceptTable(on={self.on_axis.tolist()}, "
            f"off={self.off_axis.tolist()})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, RotationPerceptTable)
            and np.array_equal(self.on_axis, other.on_axis)
            and np.array_equal(self.off_axis, other.off_axis)
            and all(np.array_equal(self.grids[s], other.grids[s]) for s in WaveformShape)
        )

    def perturbed(self, offset: float) -> 'RotationPerceptTable':
        """Adds ``offset`` to every probability and clamps to [0.5, 1]."""
        return RotationPerceptTable(
            self.on_axis,
            self.off_axis,
            {s: np.clip(g + offset, 0.5, 1.0) for s, g in self.grids.items()},
        )

    def to_frame(self) -> pd.DataFrame:
        rows = [
            [shape.value, on, off, grid[i, j]]
            for shape, grid in self.grids.items()
            for i, on in enumerate(self.on_axis)
            for j, off in enumerate(self.off_axis)
        ]
        return pd.DataFrame(rows, columns=_TABLE_COLUMNS)

    def to_csv(self, path: Union[str, Path]):
        self.to_frame().to_csv(path, index=False, lineterminator="\n")

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> 'RotationPerceptTable':
        missing = set(_TABLE_COLUMNS) - set(frame.columns)
        if missing:
            raise exceptions.InvalidTableError(
                f"Rotation table is missing columns: {', '.join(sorted(missing))}"
            )
        on_axis = np.sort(frame["on_ms"].unique())
        off_axis = np.sort(frame["off_ms"].unique())
        if frame.duplicated(["shape", "on_ms", "off_ms"]).any():
            raise exceptions.InvalidTableError("Rotation table has duplicate cells")
        grids = {}
        for shape in WaveformShape:
            rows = frame[frame["shape"] == shape.value]
            if len(rows) != on_axis.size * off_axis.size:
                raise exceptions.InvalidTableError(
                    f"Rotation table needs one row per (on_ms, off_ms) cell "
                    f"for shape '{shape.value}'"
                )
            cells = rows.set_index(["on_ms", "off_ms"])["p_correct"]
            grids[shape] = [[cells.loc[(on, off)] for off in off_axis] for on in on_axis]
        return cls(on_axis, off_axis, grids)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> 'RotationPerceptTable':
        try:
            frame = pd.read_csv(path, float_precision="round_trip")
        except (OSError, ValueError) as e:
            raise exceptions.InvalidTableError(
                f"Could not read rotation table '{path}': {e}"
            ) from e
        logger.debug(f"Loaded rotation table from {path}")
        return cls.from_frame(frame)


# Rows are on_ms, columns are off_ms, both over GRID_MS.
# fmt: off
_SQUARE_GRID = np.array([
    [0.55, 0.58, 0.63, 0.66, 0.68, 0.70],
    [0.58, 0.64, 0.72, 0.76, 0.78, 0.80],
    [0.63, 0.72, 0.89, 0.91, 0.92, 0.93],
    [0.66, 0.76, 0.91, 0.93, 0.94, 0.94],
    [0.68, 0.78, 0.92, 0.94, 0.94, 0.95],
    [0.70, 0.80, 0.93, 0.94, 0.95, 0.95],
])
# fmt: on
_INCREASING_SHIFT = -0.12
_DECREASING_SHIFT = 0.055


def default_rotation_table() -> RotationPerceptTable:
    return RotationPerceptTable(
        GRID_MS,
        GRID_MS,
        {
            WaveformShape.SQUARE: _SQUARE_GRID,
            WaveformShape.INCREASING_RAMP: np.clip(
                _SQUARE_GRID + _INCREASING_SHIFT, 0.5, 1.0
            ),
            WaveformShape.DECREASING_RAMP: np.clip(
                _SQUARE_GRID + _DECREASING_SHIFT, 0.5, 1.0
            ),
        },
    )


def predict_direction_accuracy(
    on_ms: float, off_ms: float, shape: WaveformShape, table: RotationPerceptTable
) -> float:
    """Probability that a user identifies the intended direction."""
    if not on_ms > 0 or not off_ms >= 0:
        raise exceptions.InvalidArgumentError(
            f"On-time must be > 0 and off-time >= 0, got on={on_ms}, off={off_ms}"
        )
    return float(bilinear(table.on_axis, table.off_axis, table.grids[shape], on_ms, off_ms))


def perceive_rotation(
    spec: RotationSpec, table: RotationPerceptTable, rng: UniformSource
) -> RotationDirection:
    """Direction reported by a simulated user; consumes one ``rng.random()``."""
    asserts.assert_uniform_source(rng)
    spec.validate()
    p = predict_direction_accuracy(spec.on_ms, spec.off_ms, spec.shape, table)
    return report_direction(spec.direction, p, rng)


def report_direction(
    direction: RotationDirection, accuracy: float, rng: UniformSource
) -> RotationDirection:
    """Returns ``direction`` with probability ``accuracy``, else its opposite."""
    return direction if draw_bernoulli(accuracy, rng) else direction.opposite
