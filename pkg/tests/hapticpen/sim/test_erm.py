import numpy as np
import pytest

from hapticpen import exceptions
from hapticpen.effects.timeline import Channel, Pulse
from hapticpen.sim.erm import ErmParams, simulate_erm
from tests.hapticpen.fixtures import *
from tests.hapticpen.helpers import create_timeline, write_key_values


class TestSimulateErm:
    def test_force_is_centripetal(self, erm_params):
        timeline = create_timeline(Channel.VIBE_TIP, [Pulse(0.0, 20.0)])
        profile = simulate_erm(erm_params, timeline, "vibe_tip", tail_ms=10.0)
        expected = erm_params.eccentric_mass * erm_params.eccentric_radius * profile.omega ** 2
        np.testing.assert_allclose(profile.force, expected)
        assert profile.force.max() > 0
        assert len(profile) == 3001

    def test_negative_polarity_spins_forward(self, erm_params):
        timeline = create_timeline(Channel.VIBE_END, [Pulse(0.0, 20.0, polarity=-1)])
        profile = simulate_erm(erm_params, timeline, Channel.VIBE_END, tail_ms=0.0)
        assert profile.omega[-1] > 0

    def test_other_channel_is_ignored(self, erm_params):
        timeline = create_timeline(Channel.VIBE_END, [Pulse(0.0, 20.0)])
        profile = simulate_erm(erm_params, timeline, Channel.VIBE_TIP, tail_ms=0.0)
        assert not profile.force.any()

    def test_motor_channel_is_rejected(self, erm_params):
        timeline = create_timeline(Channel.MOTOR, [Pulse(0.0, 20.0)])
        pytest.raises(
            exceptions.InvalidChannelError, simulate_erm, erm_params, timeline, Channel.MOTOR
        )

    def test_csv_header(self, erm_params):
        timeline = create_timeline(Channel.VIBE_TIP, [Pulse(0.0, 1.0)])
        text = simulate_erm(erm_params, timeline, "vibe_tip", tail_ms=0.0).to_csv()
        assert text.splitlines()[0] == "t_s,omega_rad_s,force_n"


class TestErmParams:
    def test_from_file(self, tmp_path):
        path = write_key_values(
            tmp_path / "erm.conf", {"R": "8", "eccentric_mass": "2e-4"}
        )
        params = ErmParams.from_file(path)
        assert params.motor.R == 8.0
        assert params.eccentric_mass == 2e-4
        assert params.eccentric_radius == 1.5e-3

    def test_bad_value(self):
        pytest.raises(
            exceptions.InvalidArgumentError,
            ErmParams.from_key_values,
            {"eccentric_radius": "far"},
        )

    def test_non_positive_mass(self):
        pytest.raises(
            exceptions.InvalidSpecError, ErmParams.from_key_values, {"eccentric_mass": "0"}
        )
