"""Runners reproducing the movement and rotation perception experiments with
simulated participants."""
import logging
from typing import List, Optional, Sequence

import pandas as pd

from hapticpen.effects import movement, rotation
from hapticpen.effects.timeline import WaveformShape
from hapticpen.harness.expansion import build_schedule
from hapticpen.harness.participants import ParticipantModel
from hapticpen.harness.results import ExperimentResult
from hapticpen.harness.stats import AnovaResult, rm_anova_oneway
from hapticpen.harness.sampling import (
    LatentDraw,
    paired_stratified_uniforms,
    stratified_uniforms,
)

logger = logging.getLogger(__name__)

EXPERIMENT1_GRID_MS = (50, 100, 200, 300, 400)
EXPERIMENT2_GRID_MS = (25, 75, 175, 275, 375, 575)
EXPERIMENT3_GRID_MS = (50, 200, 350)
EXPERIMENT1_SESSIONS = 2
EXPERIMENT2_SESSIONS = 3
EXPERIMENT3_SESSIONS = 2
SHAPE_CODES = {
    WaveformShape.SQUARE: "square",
    WaveformShape.INCREASING_RAMP: "inc",
    WaveformShape.DECREASING_RAMP: "dec",
}

# Per-participant random streams.
_EXPERIMENT1_STREAM = 1
_EXPERIMENT2_STREAM = 2
_EXPERIMENT3_STREAM = 3


def run_experiment1(
    participants: Sequence[ParticipantModel],
    table: Optional[movement.PerceptRegionTable] = None,
    repetitions: int = 10,
) -> ExperimentResult:
    """Percept labels over the duration x ISOI grid for both directions.

    Each participant answers 5 x 5 x 2 cells ``repetitions`` times in two
    sessions. The latent uniform of a trial depends only on its repetition, so
    the two directions are answered alike.

    Returns:

        result --
            Cells ``d_ms, isoi_ms, direction, label`` with the percentage of
            each label; summary pooled over direction.
    """
    table = movement.default_percept_table() if table is None else table
    factors = {
        "d_ms": EXPERIMENT1_GRID_MS,
        "isoi_ms": EXPERIMENT1_GRID_MS,
        "direction": [d.value for d in movement.MovementDirection],
    }
    rows = []
    for participant in participants:
        rng = participant.rng(_EXPERIMENT1_STREAM)
        schedule = build_schedule(factors, repetitions, EXPERIMENT1_SESSIONS, rng)
        latent = stratified_uniforms(rng, repetitions)
        own_table = participant.movement_table(table)
        for trial in schedule:
            c = trial.conditions
            label = movement.perceive_movement(
                c["d_ms"], c["isoi_ms"], own_table, LatentDraw(latent[trial.repetition])
            )
            rows.append(
                (c["d_ms"], c["isoi_ms"], c["direction"], participant.participant_id, label.value)
            )
    responses = pd.DataFrame(
        rows, columns=["d_ms", "isoi_ms", "direction", "participant_id", "label"]
    )
    keys = ["d_ms", "isoi_ms", "direction", "participant_id"]
    counts = (
        responses.groupby(keys + ["label"])
        .size()
        .unstack("label", fill_value=0)
        .reindex(columns=[label.value for label in movement.LABELS], fill_value=0)
    )
    percent = counts.div(counts.sum(axis=1), axis=0) * 100.0
    cells = percent.stack().rename("percent").reset_index()
    logger.info(f"Experiment 1 done with {len(participants)} participants")
    return ExperimentResult(
        "experiment1",
        cells,
        ["d_ms", "isoi_ms", "direction", "label"],
        ["d_ms", "isoi_ms", "label"],
        len(schedule) if participants else 0,
    )


def _rotation_runs(
    name: str,
    participants: Sequence[ParticipantModel],
    table: rotation.RotationPerceptTable,
    grid_ms: Sequence[int],
    shapes: Sequence[WaveformShape],
    repetitions: int,
    sessions: int,
    stream: int,
) -> ExperimentResult:
    factors = {
        "on_ms": grid_ms,
        "off_ms": grid_ms,
        "shape": [SHAPE_CODES[s] for s in shapes],
        "direction": [d.value for d in rotation.RotationDirection],
    }
    shapes_by_code = {code: shape for shape, code in SHAPE_CODES.items()}
    rows = []
    trial_count = 0
    for participant in participants:
        rng = participant.rng(stream)
        schedule = build_schedule(factors, repetitions, sessions, rng)
        trial_count = len(schedule)
        cw_slots, ccw_slots = paired_stratified_uniforms(rng, repetitions)
        own_table = participant.rotation_table(table)
        for trial in schedule:
            c = trial.conditions
            direction = rotation.RotationDirection(c["direction"])
            slots = cw_slots if direction is rotation.RotationDirection.CW else ccw_slots
            spec = rotation.RotationSpec(
                direction, float(c["on_ms"]), float(c["off_ms"]), shapes_by_code[c["shape"]]
            )
            answer = rotation.perceive_rotation(
                spec, own_table, LatentDraw(slots[trial.repetition])
            )
            rows.append(
                (
                    c["on_ms"],
                    c["off_ms"],
                    c["shape"],
                    c["direction"],
                    participant.participant_id,
                    answer is direction,
                )
            )
    keys = ["on_ms", "off_ms", "shape", "direction"]
    responses = pd.DataFrame(rows, columns=keys + ["participant_id", "correct"])
    cells = (
        responses.groupby(keys + ["participant_id"])["correct"].mean() * 100.0
    ).rename("percent").reset_index()
    logger.info(f"{name} done with {len(participants)} participants")
    return ExperimentResult(name, cells, keys, ["on_ms", "off_ms", "shape"], trial_count)


def run_experiment2(
    participants: Sequence[ParticipantModel],
    table: Optional[rotation.RotationPerceptTable] = None,
    repetitions: int = 10,
) -> ExperimentResult:
    """Direction identification over the 6 x 6 on/off grid, square pulses,
    in three sessions."""
    table = rotation.default_rotation_table() if table is None else table
    return _rotation_runs(
        "experiment2",
        participants,
        table,
        EXPERIMENT2_GRID_MS,
        [WaveformShape.SQUARE],
        repetitions,
        EXPERIMENT2_SESSIONS,
        _EXPERIMENT2_STREAM,
    )


def run_experiment3(
    participants: Sequence[ParticipantModel],
    table: Optional[rotation.RotationPerceptTable] = None,
    repetitions: int = 10,
) -> ExperimentResult:
    """Direction identification over the 3 x 3 on/off grid for each of the
    three waveforms, in two sessions."""
    table = rotation.default_rotation_table() if table is None else table
    return _rotation_runs(
        "experiment3",
        participants,
        table,
        EXPERIMENT3_GRID_MS,
        list(WaveformShape),
        repetitions,
        EXPERIMENT3_SESSIONS,
        _EXPERIMENT3_STREAM,
    )


def dominant_labels(result: ExperimentResult) -> pd.Series:
    """Pooled dominant percept label per (d_ms, isoi_ms) of an experiment 1
    result, ties going to the earlier label."""
    pooled = result.pooled(["d_ms", "isoi_ms", "label"]).unstack("label")
    order: List[str] = [label.value for label in movement.LABELS]
    return pooled[order].idxmax(axis=1)


def waveform_anova(result: ExperimentResult) -> AnovaResult:
    """RM-ANOVA of the waveform factor of an experiment 3 result, each
    participant's accuracy pooled per shape."""
    return rm_anova_oneway(result.per_participant(["shape"]).to_numpy())
