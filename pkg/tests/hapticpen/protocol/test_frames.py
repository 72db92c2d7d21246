import pytest

from hapticpen.protocol.exceptions import PayloadLayoutError
from hapticpen.protocol.frames import Frame, Opcode, is_defined


class TestFrame:
    def test_movement_fields(self):
        frame = Frame.movement(direction=0, d_ms=100, isoi_ms=50, amp=255, reps=1)
        assert frame.opcode == Opcode.MOVEMENT
        assert frame.payload == bytes([0, 100, 0, 50, 0, 255, 1])
        assert frame.fields() == (0, 100, 50, 255, 1)

    def test_describe(self):
        assert Frame.ping().describe() == "PING"
        assert (
            Frame.rotation(1, 200, 200, 2, 3, 255).describe()
            == "ROTATION dir=1 on_ms=200 off_ms=200 shape=2 count=3 amp=255"
        )
        assert Frame.status_reply(True, 2).describe() == "STATUS_REPLY busy=1 queued=2"

    def test_name_of_undefined_opcode(self):
        assert Frame(0x02).name == "0x02"
        assert not is_defined(0x02)
        assert is_defined(0xEF)

    @pytest.mark.parametrize(
        "build",
        [
            lambda: Frame.vibe(0, 256, 10),
            lambda: Frame.movement(0, 70000, 0, 1, 1),
            lambda: Frame.nak(-1),
        ],
    )
    def test_values_out_of_layout(self, build):
        pytest.raises(PayloadLayoutError, build)
