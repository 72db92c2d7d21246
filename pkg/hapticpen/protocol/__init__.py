from hapticpen.protocol.frames import Frame, Opcode, SYNC, MAX_PAYLOAD
from hapticpen.protocol.crc import crc8
from hapticpen.protocol.codec import (
    DecoderState,
    DecodeResult,
    Diagnostic,
    DiagnosticKind,
    encode_frame,
    decode_stream,
)
from hapticpen.protocol.device import DeviceState, virtual_device_step, tick
from hapticpen.protocol.transport import LoopbackTransport, SocketTransport, Transport
