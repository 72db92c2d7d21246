from hapticpen.sim.motor import (
    OffMode,
    DcMotorParams,
    MotorState,
    TorqueProfile,
    simulate_motor,
)
from hapticpen.sim.erm import ErmParams, ForceProfile, simulate_erm
from hapticpen.sim.metrics import AsymmetryMetrics, asymmetry_metrics
