"""Frame types of the stylus wire protocol.

Wire format: ``SYNC LEN OPCODE PAYLOAD CRC8`` where ``LEN = 1 + len(PAYLOAD)`` and
the CRC covers LEN through PAYLOAD. Multi-byte integers are little-endian.
"""
import enum
import struct
from dataclasses import dataclass
from typing import Dict, Tuple

from hapticpen.protocol.exceptions import PayloadLayoutError

SYNC = 0xA5
MAX_PAYLOAD = 32


class Opcode(enum.IntEnum):
    PING = 0x01
    VIBE = 0x10
    MOVEMENT = 0x11
    ROTATION = 0x20
    STOP = 0x2F
    STATUS = 0x30
    PONG = 0x81
    STATUS_REPLY = 0xB0
    NAK = 0xEF


LAYOUTS: Dict[Opcode, struct.Struct] = {
    Opcode.PING: struct.Struct("<"),
    Opcode.VIBE: struct.Struct("<BBH"),
    Opcode.MOVEMENT: struct.Struct("<BHHBB"),
    Opcode.ROTATION: struct.Struct("<BHHBBB"),
    Opcode.STOP: struct.Struct("<"),
    Opcode.STATUS: struct.Struct("<"),
    Opcode.PONG: struct.Struct("<BBB"),
    Opcode.STATUS_REPLY: struct.Struct("<BB"),
    Opcode.NAK: struct.Struct("<B"),
}

FIELD_NAMES: Dict[Opcode, Tuple[str, ...]] = {
    Opcode.PING: (),
    Opcode.VIBE: ("ch", "amp", "dur_ms"),
    Opcode.MOVEMENT: ("dir", "d_ms", "isoi_ms", "amp", "reps"),
    Opcode.ROTATION: ("dir", "on_ms", "off_ms", "shape", "count", "amp"),
    Opcode.STOP: (),
    Opcode.STATUS: (),
    Opcode.PONG: ("major", "minor", "patch"),
    Opcode.STATUS_REPLY: ("busy", "queued"),
    Opcode.NAK: ("opcode",),
}


def is_defined(opcode: int) -> bool:
    return opcode in Opcode._value2member_map_


@dataclass(frozen=True)
class Frame:
    """One protocol unit. Frames are plain values; ``encode_frame`` checks
    that the opcode is defined and the payload matches its layout.

    Example::

        frame = Frame.movement(direction=0, d_ms=100, isoi_ms=50, amp=255, reps=1)
        frame.fields()  # (0, 100, 50, 255, 1)
    """

    opcode: int
    payload: bytes = b""

    @classmethod
    def pack(cls, opcode: Opcode, *values: int) -> 'Frame':
        try:
            return cls(int(opcode), LAYOUTS[opcode].pack(*values))
        except struct.error as e:
            raise PayloadLayoutError(
                f"Values {values} do not fit the {opcode.name} layout: {e}"
            ) from e

    @classmethod
    def ping(cls) -> 'Frame':
        return cls.pack(Opcode.PING)

    @classmethod
    def stop(cls) -> 'Frame':
        return cls.pack(Opcode.STOP)

    @classmethod
    def status(cls) -> 'Frame':
        return cls.pack(Opcode.STATUS)

    @classmethod
    def vibe(cls, channel: int, amp: int, dur_ms: int) -> 'Frame':
        return cls.pack(Opcode.VIBE, channel, amp, dur_ms)

    @classmethod
    def movement(
        cls, direction: int, d_ms: int, isoi_ms: int, amp: int, reps: int
    ) -> 'Frame':
        return cls.pack(Opcode.MOVEMENT, direction, d_ms, isoi_ms, amp, reps)

    @classmethod
    def rotation(
        cls, direction: int, on_ms: int, off_ms: int, shape: int, count: int, amp: int
    ) -> 'Frame':
        return cls.pack(Opcode.ROTATION, direction, on_ms, off_ms, shape, count, amp)

    @classmethod
    def pong(cls, major: int, minor: int, patch: int) -> 'Frame':
        return cls.pack(Opcode.PONG, major, minor, patch)

    @classmethod
    def status_reply(cls, busy: bool, queued: int) -> 'Frame':
        return cls.pack(Opcode.STATUS_REPLY, int(busy), queued)

    @classmethod
    def nak(cls, opcode: int) -> 'Frame':
        return cls.pack(Opcode.NAK, opcode)

    @property
    def name(self) -> str:
        return Opcode(self.opcode).name if is_defined(self.opcode) else f"0x{self.opcode:02X}"

    def fields(self) -> Tuple[int, ...]:
        """The payload unpacked according to the opcode's layout."""
        return LAYOUTS[Opcode(self.opcode)].unpack(self.payload)

    def describe(self) -> str:
        """One-line listing, e.g. ``MOVEMENT dir=0 d_ms=100 ...``."""
        names = FIELD_NAMES[Opcode(self.opcode)]
        return " ".join(
            [self.name] + [f"{n}={v}" for n, v in zip(names, self.fields())]
        )
