"""Eccentric rotating mass (ERM) vibration actuators at the stylus ends."""
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Dict, Optional, Union

import numpy as np
import pandas as pd

from hapticpen import configuration, exceptions
from hapticpen.effects.timeline import ActuationTimeline, Channel, Pulse, as_channel
from hapticpen.sim.motor import (
    DEFAULT_DT,
    DcMotorParams,
    TorqueProfile,
    _params_from_key_values,
    simulate_motor,
)

logger = logging.getLogger(__name__)

_ERM_KEYS = ("eccentric_mass", "eccentric_radius")


@dataclass(frozen=True)
class ErmParams:
    """An ERM actuator: a DC motor spinning an off-center mass.

    Parameters:

        motor --
            The driving motor. Default: DcMotorParams().

        eccentric_mass --
            Off-center mass in kg. Default: 1e-4.

        eccentric_radius --
            Distance of the mass from the axis in m. Default: 1.5e-3.
    """

    motor: DcMotorParams = field(default_factory=DcMotorParams)
    eccentric_mass: float = 1e-4
    eccentric_radius: float = 1.5e-3

    def validate(self):
        self.motor.validate()
        if not self.eccentric_mass > 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "ErmParams", "eccentric_mass > 0", self.eccentric_mass
            )
        if not self.eccentric_radius > 0:
            raise exceptions.InvalidSpecError.for_invariant(
                "ErmParams", "eccentric_radius > 0", self.eccentric_radius
            )

    @classmethod
    def from_key_values(cls, values: Dict[str, str]) -> 'ErmParams':
        motor = _params_from_key_values(DcMotorParams, values, ignore=_ERM_KEYS)
        kwargs = {}
        for key in _ERM_KEYS:
            if key in values:
                try:
                    kwargs[key] = float(values[key])
                except ValueError:
                    raise exceptions.InvalidArgumentError(
                        f"ERM parameter '{key}' is not a number: '{values[key]}'"
                    ) from None
        params = cls(motor, **kwargs)
        params.validate()
        return params

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'ErmParams':
        return cls.from_key_values(configuration.read_key_values(path))

    def with_values(self, **modified) -> 'ErmParams':
        return replace(self, **modified)


class ForceProfile:
    """Centripetal force amplitude ``F = m r w^2`` of an ERM over time."""

    def __init__(self, motion: TorqueProfile, force: np.ndarray):
        self._motion = motion
        self._force = force
        self._force.setflags(write=False)

    def __repr__(self):
        return f"ForceProfile(dt={self.dt:g}, samples={len(self)})"

    def __len__(self):
        return self._force.size

    @property
    def dt(self) -> float:
        return self._motion.dt

    @property
    def t(self) -> np.ndarray:
        return self._motion.t

    @property
    def omega(self) -> np.ndarray:
        return self._motion.omega

    @property
    def force(self) -> np.ndarray:
        return self._force

    @property
    def motion(self) -> TorqueProfile:
        """The underlying rotor simulation."""
        return self._motion

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"t_s": self.t, "omega_rad_s": self.omega + 0.0, "force_n": self._force}
        )

    def to_csv(self, out: Optional[Union[str, Path, IO[str]]] = None) -> Optional[str]:
        """Writes ``t_s,omega_rad_s,force_n``."""
        return self.to_frame().to_csv(
            out, index=False, float_format="%.9e", lineterminator="\n"
        )


def simulate_erm(
    params: ErmParams,
    timeline: ActuationTimeline,
    channel: Union[Channel, str],
    dt: float = DEFAULT_DT,
    tail_ms: Optional[float] = None,
) -> ForceProfile:
    """Vibration force envelope of the ERM on a vibe channel.

    The channel's pulses drive the ERM motor with positive polarity.

    Example::

        profile = simulate_erm(ErmParams(), schedule_movement(spec), "vibe_tip")
        profile.force.max()
    """
    channel = as_channel(channel)
    if channel is Channel.MOTOR:
        raise exceptions.InvalidChannelError(
            "ERM simulation needs a vibe channel, 'vibe_tip' or 'vibe_end'."
        )
    params.validate()
    pulses = [
        Pulse(p.start, p.on_duration, p.amplitude, p.shape, 1)
        for p in timeline.pulses(channel)
    ]
    drive = ActuationTimeline.build({Channel.MOTOR: pulses}, timeline.total_duration)
    motion = simulate_motor(params.motor, drive, dt, tail_ms)
    force = params.eccentric_mass * params.eccentric_radius * motion.omega ** 2
    return ForceProfile(motion, force)
