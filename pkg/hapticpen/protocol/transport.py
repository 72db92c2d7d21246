"""Byte transports between a host and a stylus."""
import abc
import logging
import socket
import threading
from typing import Optional

from hapticpen.protocol.codec import DecoderState, decode_stream, encode_frame
from hapticpen.protocol.device import DeviceState, tick, virtual_device_step
from hapticpen.protocol.exceptions import CommunicationError

logger = logging.getLogger(__name__)

_RECV_SIZE = 4096


class Transport(abc.ABC):
    @abc.abstractmethod
    def send(self, data: bytes):
        pass

    @abc.abstractmethod
    def receive(self, timeout: float) -> bytes:
        """Returns the bytes available within ``timeout`` seconds, possibly
        none."""

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class SocketTransport(Transport):
    def __init__(self, sock: socket.socket):
        self._sock = sock

    def send(self, data: bytes):
        try:
            self._sock.sendall(data)
        except OSError as e:
            raise CommunicationError(f"Could not send to the device: {e}") from e

    def receive(self, timeout: float) -> bytes:
        self._sock.settimeout(timeout)
        try:
            data = self._sock.recv(_RECV_SIZE)
        except socket.timeout:
            return b""
        except OSError as e:
            raise CommunicationError(f"Could not read from the device: {e}") from e
        if not data:
            raise CommunicationError("The device closed the connection")
        return data

    def close(self):
        self._sock.close()


class DeviceServer:
    """Runs a virtual device behind one end of a socket.

    Incoming bytes go through the stream decoder and the device; replies are
    written back. ``feed`` does the same synchronously.
    """

    def __init__(self, sock: socket.socket, state: Optional[DeviceState] = None):
        self._sock = sock
        self._state = DeviceState() if state is None else state
        self._decoder = DecoderState()
        self._lock = threading.Lock()
        self._thread: Optional[threading.Thread] = None

    @property
    def state(self) -> DeviceState:
        with self._lock:
            return self._state

    @property
    def decoder(self) -> DecoderState:
        with self._lock:
            return self._decoder

    def feed(self, data: bytes) -> bytes:
        """Handles incoming bytes and returns the encoded replies."""
        replies = []
        with self._lock:
            result = decode_stream(data, self._decoder)
            self._decoder = result.state
            for diagnostic in result.diagnostics:
                logger.debug(f"Device decoder: {diagnostic.message}")
            for frame in result.frames:
                self._state, reply = virtual_device_step(self._state, frame)
                if reply is not None:
                    replies.append(encode_frame(reply))
        return b"".join(replies)

    def tick(self, delta_ms: float):
        with self._lock:
            self._state = tick(self._state, delta_ms)

    def _serve(self):
        while True:
            try:
                data = self._sock.recv(_RECV_SIZE)
            except OSError:
                break
            if not data:
                break
            replies = self.feed(data)
            if replies:
                try:
                    self._sock.sendall(replies)
                except OSError:
                    break
        logger.debug("Device server stopped")

    def start(self):
        self._thread = threading.Thread(target=self._serve, daemon=True)
        self._thread.start()

    def stop(self):
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()
        if self._thread is not None:
            self._thread.join(timeout=1.0)


class LoopbackTransport(SocketTransport):
    """A connected socket pair with a virtual device serving the far end.

    Example::

        with LoopbackTransport() as transport:
            client = StylusClient(transport)
    """

    def __init__(self, state: Optional[DeviceState] = None):
        host, device = socket.socketpair()
        super().__init__(host)
        self.server = DeviceServer(device, state)
        self.server.start()

    def close(self):
        super().close()
        self.server.stop()
