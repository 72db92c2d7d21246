"""Apparent tactile movement along the stylus.

Two vibration actuators, one at each end, are driven with identical pulses whose
onsets are separated by the inter-stimulus onset interval (ISOI). Depending on
the stimulus duration and the ISOI a user reports a single stationary buzz,
two discrete buzzes or one continuous movement.
"""
import enum
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
import pandas as pd

from hapticpen import asserts, exceptions
from hapticpen.effects.perception import (
    UniformSource,
    bilinear,
    check_axis,
    draw_index,
)
from hapticpen.effects.timeline import ActuationTimeline, Channel, Pulse, snap

logger = logging.getLogger(__name__)

GRID_MS = (50.0, 100.0, 200.0, 300.0, 400.0)
_SUM_TOLERANCE = 1e-9
_TABLE_COLUMNS = ["d_ms", "isoi_ms", "p_single", "p_discrete", "p_continuous"]


class MovementDirection(enum.Enum):
    TIP_TO_END = "tip-to-end"
    END_TO_TIP = "end-to-tip"

    @property
    def leading(self) -> Channel:
        return Channel.VIBE_TIP if self is MovementDirection.TIP_TO_END else Channel.VIBE_END

    @property
    def trailing(self) -> Channel:
        return Channel.VIBE_END if self is MovementDirection.TIP_TO_END else Channel.VIBE_TIP


class PerceptLabel(enum.Enum):
    """
    Class representing an enumeration for the reported percept. Member order
    is the tie-break order of the classifier.
    """

    SINGLE_STATIONARY = "single_stationary"
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


LABELS = (
    PerceptLabel.SINGLE_STATIONARY,
    PerceptLabel.DISCRETE,
    PerceptLabel.CONTINUOUS,
)


@dataclass(frozen=True)
class MovementSpec:
    """Request for an apparent movement effect.

    Parameters:

        direction --
            MovementDirection.TIP_TO_END or MovementDirection.END_TO_TIP.

        d --
            Stimulus duration of each actuator in ms. Must round to at least
            one 0.1 ms tick.

        isoi --
            Onset delay of the trailing actuator in ms. Must be >= 0.

        amplitude --
            Vibration level in (0, 1]. Default: 1.0.

        repetitions --
            Number of repetitions of the pair. Default: 1.

        inter_rep_gap --
            Silence between repetitions in ms. Default: 500.
    """

    direction: MovementDirection
    d: float
    isoi: float
    amplitude: float = 1.0
    repetitions: int = 1
    inter_rep_gap: float = 500.0

    def validate(self):
        """Raises InvalidSpecError naming the first violated invariant."""
        if not isinstance(self.direction, MovementDirection):
            raise exceptions.InvalidSpecError.for_invariant(
                "MovementSpec", "direction is tip-to-end or end-to-tip", self.direction
            )
        if not self.d > 0:
            raise exceptions.InvalidSpecError.for_invariant("MovementSpec", "d > 0", self.d)
        if not np.isfinite(self.d) or snap(self.d) <= 0:
            raise exceptions.InvalidSpecError.for_invariant("MovementSpec", "d >= tick", self.d)
        if not self.isoi >= 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "MovementSpec", "isoi >= 0", self.isoi
            )
        if not 0 < self.amplitude <= 1:
            raise exceptions.InvalidSpecError.for_invariant(
                "MovementSpec", "0 < amplitude <= 1", self.amplitude
            )
        if int(self.repetitions) != self.repetitions or self.repetitions < 1:
            raise exceptions.InvalidSpecError.for_invariant(
                "MovementSpec", "repetitions >= 1", self.repetitions
            )
        if not self.inter_rep_gap >= 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "MovementSpec", "inter_rep_gap >= 0", self.inter_rep_gap
            )

    @property
    def period(self) -> float:
        """Onset distance between consecutive repetitions in ms."""
        return max(self.d, self.isoi + self.d) + self.inter_rep_gap


def schedule_movement(spec: MovementSpec) -> ActuationTimeline:
    """Builds the two-actuator timeline of a movement effect.

    The leading actuator pulses at ``[0, d)`` and the trailing one at
    ``[isoi, isoi + d)``; repetitions are offset by ``isoi + d + inter_rep_gap``.

    Example::

        timeline = schedule_movement(
            MovementSpec(MovementDirection.TIP_TO_END, d=100, isoi=50)
        )
    """
    spec.validate()
    d, isoi = snap(spec.d), snap(spec.isoi)
    period = snap(spec.period)
    leading, trailing = [], []
    for rep in range(int(spec.repetitions)):
        offset = snap(rep * period)
        leading.append(Pulse(offset, d, spec.amplitude))
        trailing.append(Pulse(snap(offset + isoi), d, spec.amplitude))
    total = snap((spec.repetitions - 1) * period + isoi + d)
    return ActuationTimeline.build(
        {spec.direction.leading: leading, spec.direction.trailing: trailing}, total
    )


class PerceptRegionTable:
    """Probability of each percept label over a (d, isoi) grid.

    ``probabilities[i, j]`` is the (single, discrete, continuous) triple at
    ``d_axis[i]`` and ``isoi_axis[j]``. The table has no direction axis.
    """

    def __init__(
        self,
        d_axis: Sequence[float],
        isoi_axis: Sequence[float],
        probabilities: Union[Sequence, np.ndarray],
    ):
        self.d_axis = check_axis("d_ms", d_axis)
        self.isoi_axis = check_axis("isoi_ms", isoi_axis)
        probabilities = np.asarray(probabilities, dtype=float)
        expected = (self.d_axis.size, self.isoi_axis.size, 3)
        if probabilities.shape != expected:
            raise exceptions.InvalidTableError(
                f"Percept table has shape {probabilities.shape}, expected {expected}"
            )
        if not np.all(np.isfinite(probabilities)) or np.any(
            (probabilities < 0) | (probabilities > 1)
        ):
            raise exceptions.InvalidTableError(
                "Percept probabilities must lie within [0, 1]"
            )
        bad = np.abs(probabilities.sum(axis=2) - 1.0) > _SUM_TOLERANCE
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise exceptions.InvalidTableError(
                f"Percept probabilities at d={self.d_axis[i]:g}, "
                f"isoi={self.isoi_axis[j]:g} do not sum to 1"
            )
        self.probabilities = probabilities
        self.probabilities.setflags(write=False)

    def __repr__(self):
        return (
            f"PerceptRegionTable(d={self.d_axis.tolist()}, "
            f"isoi={self.isoi_axis.tolist()})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, PerceptRegionTable)
            and np.array_equal(self.d_axis, other.d_axis)
            and np.array_equal(self.isoi_axis, other.isoi_axis)
            and np.array_equal(self.probabilities, other.probabilities)
        )

    def perturbed(self, offset: float) -> 'PerceptRegionTable':
        """Adds ``offset`` to every probability, clamps to [0, 1] and
        renormalizes each cell."""
        shifted = np.clip(self.probabilities + offset, 0.0, 1.0)
        totals = shifted.sum(axis=2, keepdims=True)
        uniform = np.full_like(shifted, 1.0 / 3.0)
        shifted = np.where(totals > 0, shifted / np.where(totals > 0, totals, 1.0), uniform)
        return PerceptRegionTable(self.d_axis, self.isoi_axis, shifted)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            [d, isoi, *self.probabilities[i, j]]
            for i, d in enumerate(self.d_axis)
            for j, isoi in enumerate(self.isoi_axis)
        ]
        return pd.DataFrame(rows, columns=_TABLE_COLUMNS)

    def to_csv(self, path: Union[str, Path]):
        self.to_frame().to_csv(path, index=False, lineterminator="\n")

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> 'PerceptRegionTable':
        missing = set(_TABLE_COLUMNS) - set(frame.columns)
        if missing:
            raise exceptions.InvalidTableError(
                f"Percept table is missing columns: {', '.join(sorted(missing))}"
            )
        d_axis = np.sort(frame["d_ms"].unique())
        isoi_axis = np.sort(frame["isoi_ms"].unique())
        if len(frame) != d_axis.size * isoi_axis.size or frame.duplicated(
            ["d_ms", "isoi_ms"]
        ).any():
            raise exceptions.InvalidTableError(
                "Percept table must hold exactly one row per (d_ms, isoi_ms) cell"
            )
        cells = frame.set_index(["d_ms", "isoi_ms"])[_TABLE_COLUMNS[2:]]
        probabilities = np.array(
            [[cells.loc[(d, isoi)].to_numpy() for isoi in isoi_axis] for d in d_axis]
        )
        return cls(d_axis, isoi_axis, probabilities)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> 'PerceptRegionTable':
        try:
            frame = pd.read_csv(path, float_precision="round_trip")
        except (OSError, ValueError) as e:
            raise exceptions.InvalidTableError(
                f"Could not read percept table '{path}': {e}"
            ) from e
        logger.debug(f"Loaded percept table from {path}")
        return cls.from_frame(frame)


# Rows are d, columns are isoi, both over GRID_MS.
# fmt: off
_DEFAULT_PROBABILITIES = [
    [(0.80, 0.05, 0.15), (0.55, 0.15, 0.30), (0.20, 0.50, 0.30),
     (0.10, 0.70, 0.20), (0.05, 0.80, 0.15)],
    [(0.25, 0.05, 0.70), (0.15, 0.10, 0.75), (0.05, 0.25, 0.70),
     (0.05, 0.60, 0.35), (0.05, 0.75, 0.20)],
    [(0.15, 0.05, 0.80), (0.10, 0.10, 0.80), (0.05, 0.25, 0.70),
     (0.05, 0.55, 0.40), (0.05, 0.75, 0.20)],
    [(0.15, 0.05, 0.80), (0.10, 0.10, 0.80), (0.05, 0.20, 0.75),
     (0.05, 0.55, 0.40), (0.05, 0.80, 0.15)],
    [(0.15, 0.05, 0.80), (0.10, 0.10, 0.80), (0.05, 0.20, 0.75),
     (0.05, 0.55, 0.40), (0.05, 0.80, 0.15)],
]
# fmt: on


def default_percept_table() -> PerceptRegionTable:
    return PerceptRegionTable(GRID_MS, GRID_MS, _DEFAULT_PROBABILITIES)


def _check_stimulus(d: float, isoi: float):
    if not d > 0:
        raise exceptions.InvalidArgumentError(f"Stimulus duration must be > 0, got {d}")
    if not isoi >= 0:
        raise exceptions.InvalidArgumentError(f"ISOI must be >= 0, got {isoi}")


def classify_percept(
    d: float, isoi: float, table: PerceptRegionTable
) -> Tuple[PerceptLabel, Tuple[float, float, float]]:
    """Dominant percept and the interpolated probability triple at (d, isoi).

    Returns:

        (label, (p_single, p_discrete, p_continuous)) --
            Ties are broken in the order single < discrete < continuous.
    """
    _check_stimulus(d, isoi)
    triple = bilinear(table.d_axis, table.isoi_axis, table.probabilities, d, isoi)
    probabilities = (float(triple[0]), float(triple[1]), float(triple[2]))
    dominant = LABELS[int(np.argmax(probabilities))]
    return dominant, probabilities


def perceive_movement(
    d: float, isoi: float, table: PerceptRegionTable, rng: UniformSource
) -> PerceptLabel:
    """Label reported by a simulated user; consumes one ``rng.random()``."""
    asserts.assert_uniform_source(rng)
    _, probabilities = classify_percept(d, isoi, table)
    return LABELS[draw_index(probabilities, rng)]
