"""This module provides an entry-point to a stylus over a byte transport."""
import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Union

from semantic_version import SimpleSpec, Version  # type: ignore

from hapticpen import exceptions
from hapticpen.effects.movement import MovementSpec
from hapticpen.effects.rotation import RotationSpec
from hapticpen.effects.timeline import Channel, as_channel
from hapticpen.protocol import device
from hapticpen.protocol.codec import DecoderState, decode_stream, encode_frame
from hapticpen.protocol.exceptions import CommunicationError, NakError, NoReplyError
from hapticpen.protocol.frames import Frame, Opcode
from hapticpen.protocol.transport import LoopbackTransport, Transport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeviceStatus:
    busy: bool
    queued: int


class StylusClient:
    """This class sends effect commands to a stylus and reads its replies.

    Parameters:

        transport --
            The byte transport to the device. Default is None and then a
            LoopbackTransport with a virtual device is used.

        timeout --
            Seconds to wait for a reply. Default: 1.0.

    Examples::

        from hapticpen.client import StylusClient

        with StylusClient() as client:
            client.play_rotation(RotationSpec(RotationDirection.CW, 200, 200))
            client.status()
    """

    _SUPPORTED_VERSION_RANGE = ">=2.0.0,<3.0.0"

    def __init__(self, transport: Optional[Transport] = None, timeout: float = 1.0):
        self._transport = LoopbackTransport() if transport is None else transport
        self._timeout = timeout
        self._decoder = DecoderState()
        self._pending: List[Frame] = []
        try:
            self._firmware = self._validate_compatible_firmware_version()
        except Exception:
            if transport is None:
                self._transport.close()
            raise

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        self._transport.close()

    @property
    def firmware_version(self) -> Version:
        return self._firmware

    def _validate_compatible_firmware_version(self) -> Version:
        try:
            version = self.ping()
        except (CommunicationError, NoReplyError) as exce:
            raise NoReplyError(
                "No response from the device, please verify that it is connected"
            ) from exce

        if version not in SimpleSpec(self._SUPPORTED_VERSION_RANGE):
            raise exceptions.UnsupportedFirmwareVersionError(
                f"Firmware version '{version}' is not supported, "
                f"must be in the range '{self._SUPPORTED_VERSION_RANGE}'! "
                "Upgrade the stylus firmware or use a version of this package "
                f"that supports firmware '{version}'."
            )
        return version

    def _next_frame(self) -> Frame:
        deadline = time.monotonic() + self._timeout
        while not self._pending:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise NoReplyError(f"No reply within {self._timeout} s")
            result = decode_stream(self._transport.receive(remaining), self._decoder)
            self._decoder = result.state
            for diagnostic in result.diagnostics:
                logger.warning(f"Corrupt reply stream: {diagnostic.message}")
            self._pending.extend(result.frames)
        return self._pending.pop(0)

    def _expect(self, opcode: Opcode) -> Frame:
        while True:
            frame = self._next_frame()
            if frame.opcode == opcode:
                return frame
            if frame.opcode == Opcode.NAK:
                (rejected,) = frame.fields()
                raise NakError(
                    f"The device rejected opcode 0x{rejected:02X}", rejected
                )
            logger.warning(f"Ignoring unexpected {frame.name} reply")

    def _send(self, *frames: Frame):
        self._transport.send(b"".join(encode_frame(f) for f in frames))

    def ping(self) -> Version:
        """Returns the firmware version reported by the device."""
        self._send(Frame.ping())
        major, minor, patch = self._expect(Opcode.PONG).fields()
        return Version(major=major, minor=minor, patch=patch)

    def status(self) -> DeviceStatus:
        self._send(Frame.status())
        busy, queued = self._expect(Opcode.STATUS_REPLY).fields()
        return DeviceStatus(bool(busy), queued)

    def _play(self, frame: Frame) -> DeviceStatus:
        # The STATUS reply follows any NAK for the effect frame.
        self._send(frame, Frame.status())
        try:
            reply = self._expect(Opcode.STATUS_REPLY)
        except NakError:
            self._expect(Opcode.STATUS_REPLY)
            raise
        busy, queued = reply.fields()
        return DeviceStatus(bool(busy), queued)

    def play_movement(self, spec: MovementSpec) -> DeviceStatus:
        """Plays an apparent movement effect.

        Returns:

            status --
                The device status right after the effect was accepted.

        Example::

            client.play_movement(MovementSpec(MovementDirection.TIP_TO_END, 100, 50))
        """
        return self._play(device.frame_for_movement(spec))

    def play_rotation(self, spec: RotationSpec) -> DeviceStatus:
        """Plays a rotation effect."""
        return self._play(device.frame_for_rotation(spec))

    def vibrate(
        self, channel: Union[Channel, str], amplitude: float, duration_ms: float
    ) -> DeviceStatus:
        return self._play(
            device.frame_for_vibe(as_channel(channel), amplitude, duration_ms)
        )

    def stop(self) -> DeviceStatus:
        return self._play(Frame.stop())
