"""The Spinning Tops game: visual aliasing of spinning tops, a simulated player
policy and the game experiments."""
import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from hapticpen import exceptions
from hapticpen.effects import rotation
from hapticpen.effects.timeline import WaveformShape
from hapticpen.harness.participants import ParticipantModel
from hapticpen.harness.results import ExperimentResult
from hapticpen.harness.sampling import (
    LatentDraw,
    paired_stratified_uniforms,
    stratified_uniforms,
)
from hapticpen.harness.stats import AnovaResult, rm_anova_oneway
from hapticpen.options import HarnessOptions

logger = logging.getLogger(__name__)

FPS = 30
BOXES_PER_SIDE = 3
TOP_STEPS_DEG = (45.0, 90.0, 135.0)
HAPTIC_ON_MS = 200.0
HAPTIC_OFF_MS = 200.0
HAPTIC_SHAPE = WaveformShape.DECREASING_RAMP
_TOPS_STREAM = 4
_AMBIGUITY_TOLERANCE = 1e-9


class Condition(enum.Enum):
    """
    Class representing an enumeration for the sensory conditions of the game.
    """

    NVH = "NVH"  # neither vision nor haptics
    OH = "OH"  # only haptics
    OV = "OV"  # only vision
    VH = "VH"  # vision and concordant haptics
    MVH = "MVH"  # vision contradicting haptics

    @property
    def step_deg(self) -> float:
        return _CONDITION_STEPS[self]

    @property
    def visual(self) -> bool:
        return self in (Condition.OV, Condition.VH, Condition.MVH)

    @property
    def haptic(self) -> bool:
        return self in (Condition.OH, Condition.VH, Condition.MVH)

    @property
    def scores_box(self) -> bool:
        return self in (Condition.NVH, Condition.OH)

    @classmethod
    def parse(cls, value) -> 'Condition':
        if isinstance(value, Condition):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise exceptions.InvalidArgumentError(
                f"'{value}' is not a game condition! Valid conditions are "
                f"{', '.join(c.value for c in cls)}."
            ) from None


_CONDITION_STEPS = {
    Condition.NVH: 90.0,
    Condition.OH: 90.0,
    Condition.OV: 45.0,
    Condition.VH: 45.0,
    Condition.MVH: 135.0,
}

GAME_EXPERIMENTS: Dict[str, Tuple[Condition, Condition]] = {
    "I": (Condition.NVH, Condition.OH),
    "II": (Condition.OV, Condition.VH),
    "III": (Condition.VH, Condition.MVH),
}


@dataclass(frozen=True)
class ApparentStep:
    """Per-frame rotation a viewer perceives; ``degrees`` is None when the
    motion is ambiguous."""

    degrees: Optional[float]

    @property
    def ambiguous(self) -> bool:
        return self.degrees is None

    @property
    def direction(self) -> Optional[rotation.RotationDirection]:
        """CW for positive apparent steps, CCW for negative, None if ambiguous."""
        if self.degrees is None or self.degrees == 0:
            return None
        return rotation.RotationDirection.CW if self.degrees > 0 else rotation.RotationDirection.CCW


def apparent_step(step_deg: float, symmetry_deg: float = 180.0) -> ApparentStep:
    """Apparent signed step of a top with ``symmetry_deg`` rotational symmetry
    turning ``step_deg`` per frame.

    The result lies in ``(-symmetry/2, +symmetry/2]``; exactly half the
    symmetry angle is ambiguous.

    Example::

        apparent_step(135).degrees  # -45.0
    """
    if not symmetry_deg > 0:
        raise exceptions.InvalidArgumentError(
            f"Symmetry angle must be > 0, got {symmetry_deg}"
        )
    if not step_deg >= 0:
        raise exceptions.InvalidArgumentError(f"Step must be >= 0, got {step_deg}")
    half = symmetry_deg / 2
    value = math.fmod(step_deg + half, symmetry_deg) - half
    if abs(abs(value) - half) <= _AMBIGUITY_TOLERANCE * symmetry_deg:
        return ApparentStep(None)
    return ApparentStep(value)


@dataclass(frozen=True)
class Top:
    direction: rotation.RotationDirection
    step_deg: float

    def angle(self, frame: int) -> float:
        """Orientation in degrees at ``frame``, counted clockwise."""
        return (self.direction.polarity * self.step_deg * frame) % 360.0

    def apparent_direction(self) -> Optional[rotation.RotationDirection]:
        seen = apparent_step(self.step_deg).direction
        if seen is None:
            return None
        return seen if self.direction is rotation.RotationDirection.CW else seen.opposite


class Side(enum.Enum):
    LEFT = "left"  # boxes for CCW tops
    RIGHT = "right"  # boxes for CW tops

    @classmethod
    def for_direction(cls, direction: rotation.RotationDirection) -> 'Side':
        return cls.RIGHT if direction is rotation.RotationDirection.CW else cls.LEFT


@dataclass(frozen=True)
class GameState:
    """Three tops, three boxes per side with one open box each, and a score."""

    tops: Tuple[Top, ...]
    open_boxes: Tuple[int, int]  # (left, right)
    score: int = 0
    frame: int = 0

    def __post_init__(self):
        if len(self.tops) != len(TOP_STEPS_DEG):
            raise exceptions.InvalidArgumentError("The game has exactly three tops")
        if any(not 0 <= box < BOXES_PER_SIDE for box in self.open_boxes):
            raise exceptions.InvalidArgumentError(
                f"Open box index must be within 0..{BOXES_PER_SIDE - 1}"
            )

    @classmethod
    def deal(
        cls,
        rng: np.random.Generator,
        directions: Sequence[rotation.RotationDirection],
        steps_deg: Sequence[float] = TOP_STEPS_DEG,
        score: int = 0,
    ) -> 'GameState':
        """A new round; one open box per side chosen at random."""
        tops = tuple(Top(d, s) for d, s in zip(directions, steps_deg))
        left, right = rng.integers(0, BOXES_PER_SIDE, size=2)
        return cls(tops, (int(left), int(right)), score)

    def open_box(self, side: Side) -> int:
        return self.open_boxes[0 if side is Side.LEFT else 1]

    def advance(self, frames: int = 1) -> 'GameState':
        return replace(self, frame=self.frame + frames)

    @property
    def time_s(self) -> float:
        return self.frame / FPS

    def drop(self, top_index: int, side: Side, box: int) -> Tuple['GameState', bool, bool]:
        """Drops a top into ``box`` on ``side``.

        Returns:

            (state, direction_correct, box_correct) --
                The point is scored only when both are correct.
        """
        top = self.tops[top_index]
        direction_correct = side is Side.for_direction(top.direction)
        box_correct = box == self.open_box(side)
        score = self.score + int(direction_correct and box_correct)
        return replace(self, score=score), direction_correct, box_correct


def haptic_gain(
    table: rotation.RotationPerceptTable, target: float
) -> float:
    """Gain that maps the table accuracy of the game's haptic effect onto
    ``target``."""
    base = rotation.predict_direction_accuracy(
        HAPTIC_ON_MS, HAPTIC_OFF_MS, HAPTIC_SHAPE, table
    )
    if base <= 0.5:
        return 0.0
    return (target - 0.5) / (base - 0.5)


class PlayerPolicy:
    """How a simulated participant picks side and box in one condition."""

    def __init__(
        self,
        participant: ParticipantModel,
        condition: Condition,
        table: rotation.RotationPerceptTable,
        options: HarnessOptions,
    ):
        self._condition = condition
        self._p_vis = options["p_vis"]
        gain = haptic_gain(table, options["tops_direction_target"])
        own = rotation.predict_direction_accuracy(
            HAPTIC_ON_MS, HAPTIC_OFF_MS, HAPTIC_SHAPE, participant.rotation_table(table)
        )
        self.haptic_accuracy = min(max(0.5 + gain * (own - 0.5), 0.0), 1.0)
        self.box_accuracy = min(max(options["tops_box_target"] + participant.offset, 0.0), 1.0)

    def haptic_percept(
        self, truth: rotation.RotationDirection, draw: LatentDraw
    ) -> rotation.RotationDirection:
        return rotation.report_direction(truth, self.haptic_accuracy, draw)

    def choose_side(
        self,
        top: Top,
        haptic: Optional[rotation.RotationDirection],
        rng: np.random.Generator,
    ) -> Side:
        visual = top.apparent_direction() if self._condition.visual else None
        if visual is None and haptic is None:
            return Side.for_direction(_truth_for_trial(int(rng.random() >= 0.5)))
        if visual is None or haptic is None or visual is haptic:
            return Side.for_direction(visual if visual is not None else haptic)
        chosen = visual if rng.random() < self._p_vis else haptic
        return Side.for_direction(chosen)

    def choose_box(
        self, state: GameState, side: Side, draw: LatentDraw, rng: np.random.Generator
    ) -> int:
        open_box = state.open_box(side)
        if self._condition is Condition.OH:
            if draw.random() < self.box_accuracy:
                return open_box
            closed = [b for b in range(BOXES_PER_SIDE) if b != open_box]
            return closed[int(rng.integers(len(closed)))]
        return int(rng.integers(BOXES_PER_SIDE))


def _truth_for_trial(index: int) -> rotation.RotationDirection:
    return rotation.RotationDirection.CW if index % 2 == 0 else rotation.RotationDirection.CCW


def run_spinning_tops(
    condition,
    participants: Sequence[ParticipantModel],
    table: Optional[rotation.RotationPerceptTable] = None,
    options: Optional[HarnessOptions] = None,
) -> ExperimentResult:
    """Plays ``options['tops_trials']`` drops per participant in ``condition``.

    Half of the trials use a CW top and half a CCW top. Direction is scored
    against the haptically conveyed direction of the top. The box choice is
    only scored in NVH and OH.

    Returns:

        result --
            Cells ``condition, measure`` with measure ``direction`` or ``box``.

    Example::

        result = run_spinning_tops("OH", make_panel(15, seed=42, sigma_subj=0.05))
    """
    condition = Condition.parse(condition)
    table = rotation.default_rotation_table() if table is None else table
    options = HarnessOptions() if options is None else options
    trials = options["tops_trials"]
    slots = trials // 2
    condition_code = list(Condition).index(condition)
    rows = []
    for participant in participants:
        rng = participant.rng(_TOPS_STREAM, condition_code)
        cw_draws, ccw_draws = paired_stratified_uniforms(rng, slots)
        box_draws = stratified_uniforms(rng, trials)
        policy = PlayerPolicy(participant, condition, table, options)
        order = rng.permutation(trials)
        state = None
        direction_hits = box_hits = 0
        for trial in order:
            truth = _truth_for_trial(int(trial))
            slot = int(trial) // 2
            target = TOP_STEPS_DEG.index(condition.step_deg)
            directions = [
                truth if i == target else _truth_for_trial(int(rng.integers(2)))
                for i in range(len(TOP_STEPS_DEG))
            ]
            state = GameState.deal(rng, directions, score=0 if state is None else state.score)
            top = state.tops[target]
            haptic = None
            if condition.haptic:
                draws = cw_draws if truth is rotation.RotationDirection.CW else ccw_draws
                haptic = policy.haptic_percept(truth, LatentDraw(draws[slot]))
            side = policy.choose_side(top, haptic, rng)
            box = policy.choose_box(state, side, LatentDraw(box_draws[int(trial)]), rng)
            state, direction_ok, box_ok = state.drop(target, side, box)
            direction_hits += direction_ok
            box_hits += box_ok
        pid = participant.participant_id
        rows.append((condition.value, "direction", pid, 100.0 * direction_hits / trials))
        if condition.scores_box:
            rows.append((condition.value, "box", pid, 100.0 * box_hits / trials))
    cells = pd.DataFrame(rows, columns=["condition", "measure", "participant_id", "percent"])
    logger.info(f"Spinning tops {condition.value} done with {len(participants)} participants")
    return ExperimentResult(
        f"tops_{condition.value}",
        cells,
        ["condition", "measure"],
        ["condition", "measure"],
        trials,
    )


def compare_conditions(
    first: ExperimentResult, second: ExperimentResult, measure: str = "direction"
) -> AnovaResult:
    """RM-ANOVA of one measure between two game conditions played by the same
    participants."""
    a = first.per_participant(["measure"])[measure]
    b = second.per_participant(["measure"])[measure]
    matrix = pd.concat([a, b], axis=1, join="inner").to_numpy()
    if matrix.shape[0] != len(a) or matrix.shape[0] != len(b):
        raise exceptions.InvalidArgumentError(
            "Both conditions must be played by the same participants"
        )
    return rm_anova_oneway(matrix)

