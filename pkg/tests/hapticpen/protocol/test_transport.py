import socket

import pytest

from hapticpen.protocol.codec import decode_stream, encode_frame
from hapticpen.protocol.device import frame_for_rotation
from hapticpen.protocol.exceptions import CommunicationError
from hapticpen.protocol.frames import Frame
from hapticpen.protocol.transport import DeviceServer, SocketTransport
from tests.hapticpen.fixtures import *
from tests.hapticpen.helpers import create_rotation_spec


@pytest.fixture
def server():
    host, device = socket.socketpair()
    yield DeviceServer(device)
    host.close()
    device.close()


class TestDeviceServer:
    def test_feed_replies(self, server):
        replies = server.feed(encode_frame(Frame.ping()) + encode_frame(Frame.status()))
        assert decode_stream(replies).frames == [Frame.pong(2, 0, 0), Frame.status_reply(False, 0)]

    def test_feed_split_frames(self, server):
        data = encode_frame(Frame.ping())
        assert server.feed(data[:2]) == b""
        assert decode_stream(server.feed(data[2:])).frames == [Frame.pong(2, 0, 0)]

    def test_feed_skips_noise(self, server):
        replies = server.feed(b"\x00\xff" + encode_frame(Frame.ping()))
        assert decode_stream(replies).frames == [Frame.pong(2, 0, 0)]
        assert server.decoder.resyncs == 1

    def test_tick_advances_playback(self, server):
        server.feed(encode_frame(frame_for_rotation(create_rotation_spec())))
        assert server.state.busy
        server.tick(1200.0)
        assert not server.state.busy


class TestLoopbackTransport:
    def test_round_trip(self, loopback):
        loopback.send(encode_frame(Frame.ping()))
        data = b""
        for _ in range(20):
            data += loopback.receive(0.5)
            if len(data) >= 7:
                break
        assert decode_stream(data).frames == [Frame.pong(2, 0, 0)]

    def test_receive_times_out_empty(self, loopback):
        assert loopback.receive(0.01) == b""


def test_closed_peer_raises():
    host, device = socket.socketpair()
    device.close()
    transport = SocketTransport(host)
    with pytest.raises(CommunicationError):
        transport.receive(0.5)
    transport.close()
