"""A virtual stylus that executes protocol frames into timelines.

The device plays one effect at a time and queues up to ``QUEUE_DEPTH`` more.
Its playback clock only moves through ``tick``.
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from hapticpen import exceptions
from hapticpen.effects.movement import MovementDirection, MovementSpec, schedule_movement
from hapticpen.effects.rotation import RotationDirection, RotationSpec, schedule_rotation
from hapticpen.effects.timeline import (
    ActuationTimeline,
    Channel,
    Pulse,
    WaveformShape,
    snap,
)
from hapticpen.protocol.frames import Frame, Opcode, is_defined

logger = logging.getLogger(__name__)

QUEUE_DEPTH = 4
FIRMWARE_VERSION = (2, 0, 0)

_VIBE_CHANNELS = (Channel.VIBE_TIP, Channel.VIBE_END)
_MOVEMENT_DIRECTIONS = (MovementDirection.TIP_TO_END, MovementDirection.END_TO_TIP)
_ROTATION_DIRECTIONS = (RotationDirection.CW, RotationDirection.CCW)
_SHAPES = (
    WaveformShape.SQUARE,
    WaveformShape.INCREASING_RAMP,
    WaveformShape.DECREASING_RAMP,
)


@dataclass(frozen=True)
class DeviceState:
    timeline: ActuationTimeline = ActuationTimeline.empty()
    clock_ms: float = 0.0
    queue: Tuple[ActuationTimeline, ...] = ()

    @property
    def busy(self) -> bool:
        return self.clock_ms < self.timeline.total_duration

    @property
    def queued(self) -> int:
        return len(self.queue)


def _code(table, value, what):
    if value >= len(table):
        raise exceptions.InvalidSpecError(f"{what} code {value} is not defined")
    return table[value]


def timeline_for_frame(frame: Frame) -> ActuationTimeline:
    """Translates an effect frame exactly as the effect modules would.

    Raises InvalidSpecError for parameters that violate an effect invariant.
    """
    opcode = Opcode(frame.opcode)
    if opcode is Opcode.VIBE:
        ch, amp, dur_ms = frame.fields()
        channel = _code(_VIBE_CHANNELS, ch, "Vibe channel")
        if dur_ms == 0 or amp == 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "VIBE", "dur_ms > 0 and amp > 0", (dur_ms, amp)
            )
        duration = snap(float(dur_ms))
        return ActuationTimeline.build(
            {channel: [Pulse(0.0, duration, amp / 255)]}, duration
        )
    if opcode is Opcode.MOVEMENT:
        direction, d_ms, isoi_ms, amp, reps = frame.fields()
        spec = MovementSpec(
            _code(_MOVEMENT_DIRECTIONS, direction, "Movement direction"),
            float(d_ms),
            float(isoi_ms),
            amp / 255,
            reps,
        )
        return schedule_movement(spec)
    if opcode is Opcode.ROTATION:
        direction, on_ms, off_ms, shape, count, amp = frame.fields()
        spec = RotationSpec(
            _code(_ROTATION_DIRECTIONS, direction, "Rotation direction"),
            float(on_ms),
            float(off_ms),
            _code(_SHAPES, shape, "Waveform shape"),
            count,
            amp / 255,
        )
        return schedule_rotation(spec)
    raise exceptions.InvalidArgumentError(f"{opcode.name} is not an effect frame")


def _enqueue(state: DeviceState, timeline: ActuationTimeline) -> DeviceState:
    if not state.busy:
        return DeviceState(timeline, 0.0, state.queue)
    queue = state.queue + (timeline,)
    if len(queue) > QUEUE_DEPTH:
        logger.warning(
            f"Effect queue is full ({QUEUE_DEPTH}), dropping the oldest queued effect"
        )
        queue = queue[1:]
    logger.debug(f"Queued effect, {len(queue)} waiting")
    return replace(state, queue=queue)


def virtual_device_step(
    state: DeviceState, frame: Frame
) -> Tuple[DeviceState, Optional[Frame]]:
    """Executes one frame.

    Returns:

        (state, reply) --
            The updated state and the reply frame, if any. Undefined opcodes,
            reply opcodes and invalid effect parameters give a NAK and leave the
            state unchanged.
    """
    if not is_defined(frame.opcode):
        logger.warning(f"NAK for undefined opcode 0x{frame.opcode:02X}")
        return state, Frame.nak(frame.opcode)
    opcode = Opcode(frame.opcode)
    if opcode is Opcode.PING:
        return state, Frame.pong(*FIRMWARE_VERSION)
    if opcode is Opcode.STATUS:
        return state, Frame.status_reply(state.busy, state.queued)
    if opcode is Opcode.STOP:
        logger.debug("STOP, clearing playback and queue")
        return DeviceState(), None
    if opcode in (Opcode.VIBE, Opcode.MOVEMENT, Opcode.ROTATION):
        try:
            timeline = timeline_for_frame(frame)
        except exceptions.Error as e:
            logger.warning(f"NAK for {opcode.name}: {e}")
            return state, Frame.nak(frame.opcode)
        return _enqueue(state, timeline), None
    logger.warning(f"NAK for {opcode.name}, the device does not accept replies")
    return state, Frame.nak(frame.opcode)


def tick(state: DeviceState, delta_ms: float) -> DeviceState:
    """Advances the playback clock, starting queued effects as others finish."""
    if delta_ms < 0:
        raise exceptions.InvalidArgumentError(f"Clock cannot go backwards: {delta_ms}")
    timeline, clock, queue = state.timeline, state.clock_ms, state.queue
    remaining = delta_ms
    while queue and remaining >= timeline.total_duration - clock:
        remaining -= max(timeline.total_duration - clock, 0.0)
        timeline, queue = queue[0], queue[1:]
        clock = 0.0
        logger.debug(f"Started queued effect of {timeline.total_duration} ms")
    return DeviceState(timeline, clock + remaining, queue)


def _u16_ms(name: str, value: float) -> int:
    if not float(value).is_integer() or not 0 <= value <= 0xFFFF:
        raise exceptions.InvalidArgumentError(
            f"{name} must be a whole number of ms within 0..65535, got {value}"
        )
    return int(value)


def _u8(name: str, value: int) -> int:
    if int(value) != value or not 0 <= value <= 0xFF:
        raise exceptions.InvalidArgumentError(f"{name} must be within 0..255, got {value}")
    return int(value)


def _amp_u8(amplitude: float) -> int:
    if not 0 < amplitude <= 1:
        raise exceptions.InvalidSpecError.for_invariant(
            "effect", "0 < amplitude <= 1", amplitude
        )
    return max(1, round(amplitude * 255))


def frame_for_movement(spec: MovementSpec) -> Frame:
    """The MOVEMENT frame that makes the device play ``spec``.

    The inter-repetition gap is fixed by the firmware.
    """
    spec.validate()
    return Frame.movement(
        _MOVEMENT_DIRECTIONS.index(spec.direction),
        _u16_ms("d", spec.d),
        _u16_ms("isoi", spec.isoi),
        _amp_u8(spec.amplitude),
        _u8("repetitions", spec.repetitions),
    )


def frame_for_rotation(spec: RotationSpec) -> Frame:
    spec.validate()
    return Frame.rotation(
        _ROTATION_DIRECTIONS.index(spec.direction),
        _u16_ms("on_ms", spec.on_ms),
        _u16_ms("off_ms", spec.off_ms),
        _SHAPES.index(spec.shape),
        _u8("pulse_count", spec.pulse_count),
        _amp_u8(spec.amplitude),
    )


def frame_for_vibe(channel: Channel, amplitude: float, duration_ms: float) -> Frame:
    if channel not in _VIBE_CHANNELS:
        raise exceptions.InvalidChannelError(
            f"'{channel.value}' is not a vibe channel! Valid channels are "
            "'vibe_tip' and 'vibe_end'."
        )
    if not duration_ms > 0:
        raise exceptions.InvalidSpecError.for_invariant(
            "VIBE", "duration > 0", duration_ms
        )
    return Frame.vibe(
        _VIBE_CHANNELS.index(channel),
        _amp_u8(amplitude),
        _u16_ms("duration", duration_ms),
    )
