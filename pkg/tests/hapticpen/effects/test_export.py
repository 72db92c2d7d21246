import io

import pytest

from hapticpen.effects.export import timeline_to_frame, write_timeline_csv
from hapticpen.effects.movement import MovementDirection, MovementSpec, schedule_movement
from hapticpen.effects.rotation import RotationDirection, schedule_rotation
from tests.hapticpen.fixtures import *
from tests.hapticpen.helpers import create_rotation_spec


def test_timeline_csv_layout():
    timeline = schedule_movement(MovementSpec(MovementDirection.TIP_TO_END, 100, 50))
    lines = write_timeline_csv(timeline).splitlines()
    assert lines[0] == "t_ms,vibe_tip,vibe_end,motor"
    assert lines[1] == "0.000000,1.000000,0.000000,0.000000"
    assert lines[-1] == "150.000000,0.000000,0.000000,0.000000"
    assert len(lines) == 1 + 1501


def test_trailing_channel_starts_at_isoi():
    timeline = schedule_movement(MovementSpec(MovementDirection.TIP_TO_END, 100, 50))
    frame = timeline_to_frame(timeline)
    assert frame.loc[frame["vibe_end"] > 0, "t_ms"].iloc[0] == pytest.approx(50.0)


def test_ccw_motor_is_negative_and_no_negative_zero():
    timeline = schedule_rotation(create_rotation_spec(RotationDirection.CCW, 50, 50, pulse_count=1))
    text = write_timeline_csv(timeline)
    assert "\n0.000000,0.000000,0.000000,-1.000000\n" in text
    assert "-0.000000" not in text


def test_writes_to_stream():
    out = io.StringIO()
    timeline = schedule_rotation(create_rotation_spec(pulse_count=1))
    assert write_timeline_csv(timeline, out) is None
    assert out.getvalue().splitlines()[-1].startswith("400.000000,")


def test_rejects_non_timeline():
    pytest.raises(TypeError, write_timeline_csv, "timeline")
