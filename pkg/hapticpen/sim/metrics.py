import math
import logging
from dataclasses import dataclass

import numpy as np

from hapticpen import asserts, exceptions
from hapticpen.sim.motor import TorqueProfile

logger = logging.getLogger(__name__)

PEAK_FLOOR = 1e-12


@dataclass(frozen=True)
class AsymmetryMetrics:
    peak_intended: float
    peak_opposite: float
    ratio: float
    net_impulse: float

    def comment_line(self) -> str:
        """Summary in the ``# peak_fwd=... peak_rev=... A=... net=...`` form."""
        return (
            f"# peak_fwd={self.peak_intended:.6e} peak_rev={self.peak_opposite:.6e} "
            f"A={self.ratio:.6g} net={self.net_impulse:.3e}"
        )


def asymmetry_metrics(profile: TorqueProfile, intended_sign: int) -> AsymmetryMetrics:
    """Casing torque peaks in and against the intended direction.

    The ratio is infinite when there is no measurable opposite peak, and 1.0 by
    convention when there is no torque at all.
    """
    asserts.assert_sign(intended_sign)
    if len(profile) == 0:
        raise exceptions.InvalidArgumentError("Torque profile is empty")
    signed = intended_sign * profile.tau_casing
    peak_intended = max(float(np.max(signed)), 0.0)
    peak_opposite = max(float(np.max(-signed)), 0.0)
    if peak_opposite < PEAK_FLOOR:
        ratio = 1.0 if peak_intended < PEAK_FLOOR else math.inf
    else:
        ratio = peak_intended / peak_opposite
    net_impulse = float(np.sum(profile.tau_casing) * profile.dt)
    return AsymmetryMetrics(peak_intended, peak_opposite, ratio, net_impulse)
