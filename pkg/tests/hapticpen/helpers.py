import numpy as np

from hapticpen.effects.rotation import RotationDirection, RotationSpec
from hapticpen.effects.timeline import ActuationTimeline, Channel, Pulse, WaveformShape
from hapticpen.protocol.frames import Frame, Opcode


def create_timeline(channel=Channel.VIBE_TIP, pulses=(), total_duration=None):
    return ActuationTimeline.build({channel: list(pulses)}, total_duration)


def create_motor_timeline(on_ms, total_ms=None, shape=WaveformShape.SQUARE, polarity=1):
    return ActuationTimeline.build(
        {Channel.MOTOR: [Pulse(0.0, on_ms, 1.0, shape, polarity)]}, total_ms
    )


def create_rotation_spec(
    direction=RotationDirection.CW,
    on_ms=200.0,
    off_ms=200.0,
    shape=WaveformShape.SQUARE,
    pulse_count=3,
):
    return RotationSpec(direction, on_ms, off_ms, shape, pulse_count)


def random_rotation_spec(rng):
    return RotationSpec(
        RotationDirection.CW if rng.random() < 0.5 else RotationDirection.CCW,
        float(rng.integers(25, 576)),
        float(rng.integers(0, 576)),
        list(WaveformShape)[int(rng.integers(3))],
        int(rng.integers(1, 4)),
        float(rng.integers(1, 11)) / 10,
    )


def random_valid_frame(rng):
    opcode = list(Opcode)[int(rng.integers(len(Opcode)))]
    if opcode is Opcode.VIBE:
        return Frame.vibe(int(rng.integers(2)), int(rng.integers(256)), int(rng.integers(65536)))
    if opcode is Opcode.MOVEMENT:
        return Frame.movement(*_randints(rng, 1, 2, 2, 1, 1))
    if opcode is Opcode.ROTATION:
        return Frame.rotation(*_randints(rng, 1, 2, 2, 1, 1, 1))
    if opcode is Opcode.PONG:
        return Frame.pong(*_randints(rng, 1, 1, 1))
    if opcode is Opcode.STATUS_REPLY:
        return Frame.status_reply(bool(rng.integers(2)), int(rng.integers(256)))
    if opcode is Opcode.NAK:
        return Frame.nak(int(rng.integers(256)))
    return Frame(int(opcode))


def _randints(rng, *widths):
    return [int(rng.integers(256 ** width)) for width in widths]


def hex_bytes(text):
    return bytes.fromhex(text.replace(" ", ""))


def write_key_values(path, values):
    path.write_text("".join(f"{key} = {value}\n" for key, value in values.items()))
    return path


def random_splits(rng, size, pieces):
    cuts = np.sort(rng.choice(np.arange(1, size), size=min(pieces, size - 1), replace=False))
    return [0, *cuts.tolist(), size]
