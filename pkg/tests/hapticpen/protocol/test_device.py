import pytest

from hapticpen import exceptions
from hapticpen.effects.movement import MovementDirection, MovementSpec, schedule_movement
from hapticpen.effects.rotation import RotationDirection, schedule_rotation
from hapticpen.effects.timeline import Channel, WaveformShape
from hapticpen.protocol.device import (
    QUEUE_DEPTH,
    DeviceState,
    frame_for_movement,
    frame_for_rotation,
    frame_for_vibe,
    tick,
    timeline_for_frame,
    virtual_device_step,
)
from hapticpen.protocol.frames import Frame, Opcode
from tests.hapticpen.fixtures import *
from tests.hapticpen.helpers import create_rotation_spec


def _play(state, *frames):
    for frame in frames:
        state, reply = virtual_device_step(state, frame)
        assert reply is None
    return state


class TestTimelineForFrame:
    @pytest.mark.parametrize("direction", list(MovementDirection))
    def test_movement_matches_schedule(self, direction):
        spec = MovementSpec(direction, 100.0, 50.0, repetitions=2)
        assert timeline_for_frame(frame_for_movement(spec)) == schedule_movement(spec)

    @pytest.mark.parametrize("shape", list(WaveformShape))
    def test_rotation_matches_schedule(self, shape):
        spec = create_rotation_spec(direction=RotationDirection.CCW, shape=shape)
        assert timeline_for_frame(frame_for_rotation(spec)) == schedule_rotation(spec)

    def test_vibe(self):
        timeline = timeline_for_frame(Frame.vibe(1, 255, 300))
        (pulse,) = timeline.pulses(Channel.VIBE_END)
        assert (pulse.start, pulse.on_duration, pulse.amplitude) == (0.0, 300.0, 1.0)
        assert timeline.total_duration == 300.0
        assert timeline.pulses(Channel.VIBE_TIP) == ()

    @pytest.mark.parametrize(
        "frame",
        [
            Frame.vibe(2, 255, 100),
            Frame.vibe(0, 0, 100),
            Frame.vibe(0, 255, 0),
            Frame.movement(2, 100, 50, 255, 1),
            Frame.movement(0, 0, 50, 255, 1),
            Frame.rotation(0, 200, 200, 3, 3, 255),
            Frame.rotation(0, 200, 200, 0, 0, 255),
        ],
    )
    def test_invalid_parameters(self, frame):
        pytest.raises(exceptions.InvalidSpecError, timeline_for_frame, frame)

    def test_non_effect_frame(self):
        pytest.raises(exceptions.InvalidArgumentError, timeline_for_frame, Frame.ping())


class TestVirtualDeviceStep:
    def test_ping(self):
        state, reply = virtual_device_step(DeviceState(), Frame.ping())
        assert reply == Frame.pong(2, 0, 0)
        assert state == DeviceState()

    def test_status_when_idle(self):
        _, reply = virtual_device_step(DeviceState(), Frame.status())
        assert reply.fields() == (0, 0)

    def test_effects_queue_behind_the_playing_one(self, square_rotation):
        frame = frame_for_rotation(square_rotation)
        state = _play(DeviceState(), frame, frame, frame)
        assert state.busy
        assert state.queued == 2
        _, reply = virtual_device_step(state, Frame.status())
        assert reply == Frame.status_reply(True, 2)

    def test_full_queue_drops_the_oldest(self, square_rotation):
        first = frame_for_rotation(square_rotation)
        others = [
            frame_for_rotation(create_rotation_spec(pulse_count=k)) for k in (1, 2, 3, 4, 5)
        ]
        state = _play(DeviceState(), first, *others)
        assert state.queued == QUEUE_DEPTH
        assert state.queue[0] == timeline_for_frame(others[1])

    def test_stop_clears_everything(self, square_rotation):
        frame = frame_for_rotation(square_rotation)
        state = _play(DeviceState(), frame, frame)
        state, reply = virtual_device_step(state, Frame.stop())
        assert reply is None
        assert state == DeviceState()
        assert not state.busy

    def test_invalid_effect_is_nakked(self, square_rotation):
        state = _play(DeviceState(), frame_for_rotation(square_rotation))
        after, reply = virtual_device_step(state, Frame.movement(0, 0, 50, 255, 1))
        assert reply == Frame.nak(int(Opcode.MOVEMENT))
        assert after == state

    @pytest.mark.parametrize("frame", [Frame(0x02), Frame.pong(1, 0, 0), Frame.nak(1)])
    def test_unaccepted_opcodes_are_nakked(self, frame):
        state, reply = virtual_device_step(DeviceState(), frame)
        assert reply == Frame.nak(frame.opcode)
        assert state == DeviceState()


class TestTick:
    def test_playback_finishes(self, square_rotation):
        state = _play(DeviceState(), frame_for_rotation(square_rotation))
        assert tick(state, 1199.0).busy
        assert not tick(state, 1200.0).busy

    def test_queued_effect_starts(self, square_rotation):
        second = create_rotation_spec(pulse_count=1)
        state = _play(
            DeviceState(), frame_for_rotation(square_rotation), frame_for_rotation(second)
        )
        state = tick(state, 1300.0)
        assert state.timeline == schedule_rotation(second)
        assert state.clock_ms == pytest.approx(100.0)
        assert state.queued == 0

    def test_effect_after_idle_starts_at_once(self, square_rotation):
        state = tick(DeviceState(), 5000.0)
        state = _play(state, frame_for_rotation(square_rotation))
        assert state.clock_ms == 0.0
        assert state.queued == 0

    def test_clock_cannot_go_backwards(self):
        pytest.raises(exceptions.InvalidArgumentError, tick, DeviceState(), -1.0)


class TestFrameFor:
    def test_amplitude_is_scaled(self):
        spec = MovementSpec(MovementDirection.END_TO_TIP, 100.0, 50.0, amplitude=0.5)
        assert frame_for_movement(spec).fields() == (1, 100, 50, 128, 1)

    def test_fractional_ms_is_rejected(self):
        spec = create_rotation_spec(on_ms=200.5)
        pytest.raises(exceptions.InvalidArgumentError, frame_for_rotation, spec)

    def test_out_of_range_ms_is_rejected(self):
        spec = MovementSpec(MovementDirection.TIP_TO_END, 70000.0, 50.0)
        pytest.raises(exceptions.InvalidArgumentError, frame_for_movement, spec)

    def test_invalid_spec(self):
        pytest.raises(
            exceptions.InvalidSpecError, frame_for_rotation, create_rotation_spec(on_ms=0.0)
        )

    def test_vibe(self):
        assert frame_for_vibe(Channel.VIBE_TIP, 1.0, 300).fields() == (0, 255, 300)

    def test_vibe_on_motor_channel(self):
        pytest.raises(exceptions.InvalidChannelError, frame_for_vibe, Channel.MOTOR, 1.0, 10)

    def test_vibe_without_duration(self):
        pytest.raises(exceptions.InvalidSpecError, frame_for_vibe, Channel.VIBE_END, 1.0, 0)
