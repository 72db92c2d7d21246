import numpy as np
import pytest

from hapticpen.client import StylusClient
from hapticpen.effects.movement import default_percept_table
from hapticpen.effects.rotation import default_rotation_table
from hapticpen.harness.participants import make_panel
from hapticpen.options import HarnessOptions
from hapticpen.protocol.transport import LoopbackTransport
from hapticpen.sim.erm import ErmParams
from hapticpen.sim.motor import DcMotorParams, OffMode
from tests.hapticpen.helpers import create_rotation_spec


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def motor_params():
    return DcMotorParams()


@pytest.fixture
def coast_motor_params():
    return DcMotorParams(off_mode=OffMode.COAST)


@pytest.fixture
def erm_params():
    return ErmParams()


@pytest.fixture
def square_rotation():
    return create_rotation_spec()


@pytest.fixture
def percept_table():
    return default_percept_table()


@pytest.fixture
def rotation_table():
    return default_rotation_table()


@pytest.fixture
def harness_options():
    return HarnessOptions()


@pytest.fixture
def panel():
    return make_panel(10, seed=7, sigma_subj=0.05)


@pytest.fixture
def loopback():
    transport = LoopbackTransport()
    yield transport
    transport.close()


@pytest.fixture
def stylus(loopback):
    return StylusClient(loopback)


@pytest.fixture
def motor_params_file(tmp_path):
    path = tmp_path / "motor.conf"
    path.write_text(
        "# stylus motor\n"
        "R = 10\n"
        "L = 0.5e-3\n"
        "k_t = 0.005\n"
        "k_e = 0.005\n"
        "J = 1e-7\n"
        "b = 1e-7\n"
        "v_supply = 3.0\n"
        "off_mode = coast\n"
    )
    return path
