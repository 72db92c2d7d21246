from hapticpen.effects.timeline import (
    TICK_MS,
    CHANNELS,
    Channel,
    WaveformShape,
    Pulse,
    ActuationTimeline,
    Violation,
    ViolationKind,
    sample,
    validate,
    quantize,
    grid_times,
    render,
)
from hapticpen.effects.movement import (
    MovementDirection,
    MovementSpec,
    PerceptLabel,
    PerceptRegionTable,
    schedule_movement,
    classify_percept,
    perceive_movement,
    default_percept_table,
)
from hapticpen.effects.rotation import (
    RotationDirection,
    RotationSpec,
    RotationPerceptTable,
    schedule_rotation,
    predict_direction_accuracy,
    perceive_rotation,
    report_direction,
    default_rotation_table,
    intended_sign,
)
from hapticpen.effects.export import write_timeline_csv, timeline_to_frame
