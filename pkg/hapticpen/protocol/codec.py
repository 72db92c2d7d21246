"""Frame encoding and the incremental, resynchronizing stream decoder."""
import enum
import logging
from dataclasses import dataclass, replace
from typing import List, Optional

from hapticpen.protocol.crc import crc8
from hapticpen.protocol.exceptions import (
    FrameTooLargeError,
    PayloadLayoutError,
    UndefinedOpcodeError,
)
from hapticpen.protocol.frames import LAYOUTS, MAX_PAYLOAD, SYNC, Frame, Opcode, is_defined

logger = logging.getLogger(__name__)

_SYNC_BYTE = bytes([SYNC])
_MAX_LEN = 1 + MAX_PAYLOAD


def encode_frame(frame: Frame) -> bytes:
    """Serializes ``frame`` as ``A5 LEN OPCODE PAYLOAD CRC8``.

    Example::

        encode_frame(Frame.ping()).hex(" ").upper()  # 'A5 01 01 12'
    """
    payload = bytes(frame.payload)
    if len(payload) > MAX_PAYLOAD:
        raise FrameTooLargeError(
            f"Payload of {len(payload)} bytes exceeds the {MAX_PAYLOAD} byte limit"
        )
    if not is_defined(frame.opcode):
        raise UndefinedOpcodeError(f"Opcode 0x{frame.opcode:02X} is not defined")
    expected = LAYOUTS[Opcode(frame.opcode)].size
    if len(payload) != expected:
        raise PayloadLayoutError(
            f"{Opcode(frame.opcode).name} takes a {expected} byte payload, "
            f"got {len(payload)}"
        )
    body = bytes([1 + len(payload), frame.opcode]) + payload
    return _SYNC_BYTE + body + bytes([crc8(body)])


class DiagnosticKind(enum.Enum):
    RESYNC = "resync"
    CRC_MISMATCH = "crc_mismatch"
    BAD_LENGTH = "bad_length"
    BAD_OPCODE = "bad_opcode"
    BAD_PAYLOAD = "bad_payload"


@dataclass(frozen=True)
class Diagnostic:
    kind: DiagnosticKind
    offset: int
    message: str


@dataclass(frozen=True)
class DecoderState:
    """Bytes waiting for a decision plus running counters.

    ``offset`` is the stream position of the first buffered byte. ``in_sync`` is
    False while bytes are being discarded.
    """

    buffer: bytes = b""
    offset: int = 0
    in_sync: bool = True
    frames: int = 0
    resyncs: int = 0
    bytes_discarded: int = 0
    crc_errors: int = 0
    length_errors: int = 0
    opcode_errors: int = 0


@dataclass(frozen=True)
class DecodeResult:
    frames: List[Frame]
    diagnostics: List[Diagnostic]
    state: DecoderState


class _Scan:
    def __init__(self, state: DecoderState, data: bytes):
        self.buffer = state.buffer + bytes(data)
        self.base = state.offset
        self.counters = {
            "in_sync": state.in_sync,
            "frames": state.frames,
            "resyncs": state.resyncs,
            "bytes_discarded": state.bytes_discarded,
            "crc_errors": state.crc_errors,
            "length_errors": state.length_errors,
            "opcode_errors": state.opcode_errors,
        }
        self.frames: List[Frame] = []
        self.diagnostics: List[Diagnostic] = []

    def discard(self, position: int, count: int):
        if count <= 0:
            return
        if self.counters["in_sync"]:
            self.counters["in_sync"] = False
            self.counters["resyncs"] += 1
            self.diagnostics.append(
                Diagnostic(
                    DiagnosticKind.RESYNC,
                    self.base + position,
                    "discarding bytes while searching for sync",
                )
            )
        self.counters["bytes_discarded"] += count

    def reject(self, kind: DiagnosticKind, counter: str, position: int, message: str):
        self.counters[counter] += 1
        self.diagnostics.append(Diagnostic(kind, self.base + position, message))
        logger.debug(f"Rejected frame at offset {self.base + position}: {message}")
        self.discard(position, 1)

    def run(self) -> int:
        """Consumes every decidable byte and returns the first undecided one."""
        buffer = self.buffer
        position = 0
        while position < len(buffer):
            sync = buffer.find(_SYNC_BYTE, position)
            if sync < 0:
                self.discard(position, len(buffer) - position)
                return len(buffer)
            self.discard(position, sync - position)
            position = sync
            if len(buffer) - position < 2:
                return position
            length = buffer[position + 1]
            if not 1 <= length <= _MAX_LEN:
                self.reject(
                    DiagnosticKind.BAD_LENGTH,
                    "length_errors",
                    position,
                    f"LEN {length} is outside 1..{_MAX_LEN}",
                )
                position += 1
                continue
            end = position + 2 + length + 1
            if len(buffer) < end:
                return position
            body = buffer[position + 1:end - 1]
            if crc8(body) != buffer[end - 1]:
                self.reject(
                    DiagnosticKind.CRC_MISMATCH,
                    "crc_errors",
                    position,
                    f"CRC 0x{buffer[end - 1]:02X} != 0x{crc8(body):02X}",
                )
                position += 1
                continue
            opcode, payload = body[1], bytes(body[2:])
            if not is_defined(opcode):
                self.reject(
                    DiagnosticKind.BAD_OPCODE,
                    "opcode_errors",
                    position,
                    f"opcode 0x{opcode:02X} is not defined",
                )
                position += 1
                continue
            if len(payload) != LAYOUTS[Opcode(opcode)].size:
                self.reject(
                    DiagnosticKind.BAD_PAYLOAD,
                    "length_errors",
                    position,
                    f"{Opcode(opcode).name} payload has {len(payload)} bytes",
                )
                position += 1
                continue
            self.frames.append(Frame(opcode, payload))
            self.counters["frames"] += 1
            self.counters["in_sync"] = True
            position = end
        return position


def decode_stream(data: bytes, state: Optional[DecoderState] = None) -> DecodeResult:
    """Feeds ``data`` to the decoder.

    Never raises on any input. Bad frames become diagnostics and cost one
    discarded byte before the decoder rescans for ``0xA5``. The frames found
    are the same however the stream is split into chunks.

    Parameters:

        data --
            The next chunk of the byte stream.

        state --
            The state returned by the previous call. Default: a fresh decoder.

    Returns:

        result --
            A DecodeResult with the frames, the diagnostics and the updated
            state to pass to the next call.
    """
    state = DecoderState() if state is None else state
    scan = _Scan(state, data)
    consumed = scan.run()
    new_state = replace(
        state,
        buffer=scan.buffer[consumed:],
        offset=state.offset + consumed,
        **scan.counters,
    )
    return DecodeResult(scan.frames, scan.diagnostics, new_state)
