"""Brushed DC motor driven by the motor channel of a timeline.

The motor obeys::

    di/dt = (v - R i - k_e w) / L
    dw/dt = (k_t i - b w) / J

and is integrated with the classical fixed-step fourth order Runge-Kutta method.
Since the model is linear, one step is the affine map
``x+ = T x + G0 h B v0 + Gm h B vm + G1 h B v1`` which is evaluated for the whole
run at once, mode by mode, with ``scipy.signal.lfilter``.
"""
import enum
import logging
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from collections.abc import Sequence
from typing import IO, Dict, Iterator, List, Optional, Tuple, Union, overload

import numpy as np
import pandas as pd
from scipy.signal import lfilter  # type: ignore

from hapticpen import asserts, configuration, exceptions
from hapticpen.effects.timeline import (
    ActuationTimeline,
    Channel,
    active_mask,
    grid_points,
    render,
    step_count,
    validate,
)

logger = logging.getLogger(__name__)

DEFAULT_DT = 1e-5
REST_OMEGA = 1e-3
_EPS = 1e-12
_MIN_TAIL_TIME_CONSTANTS = 10
_EXTRA_TAIL_TIME_CONSTANTS = 5
_MAX_TAIL_EXTENSIONS = 20
_MAX_MODAL_CONDITION = 1e8


class OffMode(enum.Enum):
    """
    Class representing an enumeration for the driver state during off-time.
    BRAKE shorts the winding, COAST opens the circuit.
    """

    BRAKE = "brake"
    COAST = "coast"


@dataclass(frozen=True)
class DcMotorParams:
    """Electromechanical constants of the stylus motor, SI units.

    Parameters:

        R --
            Winding resistance in ohm.

        L --
            Winding inductance in H.

        k_t --
            Torque constant in N m/A.

        k_e --
            Back-EMF constant in V s/rad.

        J --
            Rotor inertia in kg m^2.

        b --
            Viscous friction in N m s/rad.

        v_supply --
            Voltage corresponding to drive level 1.0.

        off_mode --
            OffMode.BRAKE (default) or OffMode.COAST.

    Example::

        params = DcMotorParams(v_supply=4.5, off_mode=OffMode.COAST)
        params.omega_max
    """

    R: float = 10.0
    L: float = 0.5e-3
    k_t: float = 0.005
    k_e: float = 0.005
    J: float = 1e-7
    b: float = 1e-7
    v_supply: float = 3.0
    off_mode: OffMode = OffMode.BRAKE

    def validate(self):
        for name in ("R", "L", "k_t", "k_e", "J"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise exceptions.InvalidSpecError.for_invariant(
                    "DcMotorParams", f"{name} > 0", value
                )
        if not (math.isfinite(self.b) and self.b >= 0):
            raise exceptions.InvalidSpecError.for_invariant(
                "DcMotorParams", "b >= 0", self.b
            )
        if not math.isfinite(self.v_supply):
            raise exceptions.InvalidSpecError.for_invariant(
                "DcMotorParams", "v_supply is finite", self.v_supply
            )
        if not isinstance(self.off_mode, OffMode):
            raise exceptions.InvalidSpecError.for_invariant(
                "DcMotorParams", "off_mode is brake or coast", self.off_mode
            )

    @property
    def omega_max(self) -> float:
        """Terminal angular velocity at full drive in rad/s."""
        return self.k_t * self.v_supply / (self.R * self.b + self.k_t * self.k_e)

    @property
    def electrical_time_constant(self) -> float:
        return self.L / self.R

    @property
    def mechanical_time_constant(self) -> float:
        return self.J * self.R / (self.R * self.b + self.k_t * self.k_e)

    @property
    def max_step(self) -> float:
        """Largest accepted integration step in s."""
        return min(self.L / self.R, self.J / max(self.b, _EPS)) / 5.0

    def state_matrix(self) -> np.ndarray:
        return np.array(
            [
                [-self.R / self.L, -self.k_e / self.L],
                [self.k_t / self.J, -self.b / self.J],
            ]
        )

    def input_vector(self) -> np.ndarray:
        return np.array([1.0 / self.L, 0.0])

    def off_time_constant(self) -> Optional[float]:
        """Slowest decay time constant of a rotor left alone, None if the rotor
        never comes to rest."""
        if self.off_mode is OffMode.COAST:
            return self.J / self.b if self.b > 0 else None
        slowest = float(np.max(np.linalg.eigvals(self.state_matrix()).real))
        return -1.0 / slowest

    @classmethod
    def from_key_values(cls, values: Dict[str, str]) -> 'DcMotorParams':
        return _params_from_key_values(cls, values)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'DcMotorParams':
        """Reads a flat ``key = value`` params file in SI units."""
        return cls.from_key_values(configuration.read_key_values(path))

    def with_values(self, **modified) -> 'DcMotorParams':
        return replace(self, **modified)


def _params_from_key_values(cls, values: Dict[str, str], ignore=()):
    known = {f.name for f in fields(cls)}
    unknown = set(values) - known - set(ignore)
    if unknown:
        raise exceptions.InvalidArgumentError(
            f"Unknown motor parameters: {', '.join(sorted(unknown))}"
        )
    kwargs = {}
    for name, raw in values.items():
        if name in ignore:
            continue
        if name == "off_mode":
            try:
                kwargs[name] = OffMode(raw.strip().lower())
            except ValueError:
                raise exceptions.InvalidArgumentError(
                    f"off_mode must be 'brake' or 'coast', got '{raw}'"
                ) from None
        else:
            try:
                kwargs[name] = float(raw)
            except ValueError:
                raise exceptions.InvalidArgumentError(
                    f"Motor parameter '{name}' is not a number: '{raw}'"
                ) from None
    params = cls(**kwargs)
    params.validate()
    return params


@dataclass(frozen=True)
class MotorState:
    t: float
    omega: float
    current: float
    tau_casing: float


class TorqueProfile(Sequence):
    """Simulated motor states on a uniform time grid.

    Indexing yields ``MotorState`` objects; the underlying columns are
    available as read-only numpy arrays.
    """

    def __init__(
        self, dt: float, omega: np.ndarray, current: np.ndarray, tau_casing: np.ndarray
    ):
        self._dt = dt
        self._t = np.arange(len(omega)) * dt
        self._omega = omega
        self._current = current
        self._tau = tau_casing
        for array in (self._t, self._omega, self._current, self._tau):
            array.setflags(write=False)

    def __repr__(self):
        return f"TorqueProfile(dt={self._dt:g}, samples={len(self)})"

    def __len__(self):
        return self._omega.size

    @overload
    def __getitem__(self, index: int) -> MotorState:
        ...

    @overload
    def __getitem__(self, index: slice) -> List[MotorState]:
        ...

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        return MotorState(
            float(self._t[index]),
            float(self._omega[index]),
            float(self._current[index]),
            float(self._tau[index]),
        )

    def __iter__(self) -> Iterator[MotorState]:
        for i in range(len(self)):
            yield self[i]

    @property
    def dt(self) -> float:
        return self._dt

    @property
    def t(self) -> np.ndarray:
        return self._t

    @property
    def omega(self) -> np.ndarray:
        return self._omega

    @property
    def current(self) -> np.ndarray:
        return self._current

    @property
    def tau_casing(self) -> np.ndarray:
        return self._tau

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t_s": self._t,
                "omega_rad_s": self._omega + 0.0,
                "current_a": self._current + 0.0,
                "tau_casing_nm": self._tau + 0.0,
            }
        )

    def to_csv(self, out: Optional[Union[str, Path, IO[str]]] = None) -> Optional[str]:
        """Writes ``t_s,omega_rad_s,current_a,tau_casing_nm``."""
        return self.to_frame().to_csv(
            out, index=False, float_format="%.9e", lineterminator="\n"
        )


class _Rk4:
    """One classical RK4 step of the motor ODE as an affine map."""

    def __init__(self, params: DcMotorParams, dt: float):
        self.dt = dt
        a = params.state_matrix()
        hb = dt * params.input_vector()
        eye = np.eye(2)
        z = dt * a
        z2 = z @ z
        z3 = z2 @ z
        z4 = z3 @ z
        self.transition = eye + z + z2 / 2 + z3 / 6 + z4 / 24
        self.g0 = (eye + z + z2 / 2 + z3 / 4) @ hb / 6
        self.gm = (4 * eye + 2 * z + z2 / 2) @ hb / 6
        self.g1 = hb / 6
        # Friction-only decay of an open-circuit rotor.
        zc = -dt * params.b / params.J
        self.coast_factor = 1 + zc + zc ** 2 / 2 + zc ** 3 / 6 + zc ** 4 / 24

        mu, vectors = np.linalg.eig(self.transition)
        self._modal = np.linalg.cond(vectors) < _MAX_MODAL_CONDITION
        if self._modal:
            self._mu = mu.astype(complex)
            self._vectors = vectors.astype(complex)
            self._inverse = np.linalg.inv(self._vectors)
        else:
            logger.debug("Ill-conditioned eigenvectors, stepping the RK4 map in a loop")

    def forcing(self, v0: np.ndarray, vm: np.ndarray, v1: np.ndarray) -> np.ndarray:
        return (
            v0[:, None] * self.g0[None, :]
            + vm[:, None] * self.gm[None, :]
            + v1[:, None] * self.g1[None, :]
        )

    def propagate(self, x0: np.ndarray, forcing: np.ndarray) -> np.ndarray:
        """States after each of ``len(forcing)`` steps from ``x0``."""
        n = forcing.shape[0]
        if n == 0:
            return np.empty((0, 2))
        if not self._modal:
            states = np.empty((n, 2))
            x = x0
            for k in range(n):
                x = self.transition @ x + forcing[k]
                states[k] = x
            return states
        w = forcing @ self._inverse.T
        z0 = self._inverse @ x0
        modes = np.empty((n, 2), dtype=complex)
        for j in range(2):
            modes[:, j], _ = lfilter(
                [1.0], [1.0, -self._mu[j]], w[:, j], zi=[self._mu[j] * z0[j]]
            )
        return (modes @ self._vectors.T).real

    def coast(self, x0: np.ndarray, n: int) -> np.ndarray:
        states = np.zeros((n, 2))
        states[:, 1] = x0[1] * self.coast_factor ** np.arange(1, n + 1)
        return states


def _runs(mask: np.ndarray) -> Iterator[Tuple[bool, int, int]]:
    if mask.size == 0:
        return
    edges = np.flatnonzero(np.diff(mask.astype(np.int8))) + 1
    bounds = [0, *edges.tolist(), mask.size]
    for start, stop in zip(bounds, bounds[1:]):
        yield bool(mask[start]), start, stop


def _integrate(
    params: DcMotorParams,
    rk4: _Rk4,
    x0: np.ndarray,
    forcing: np.ndarray,
    on_steps: np.ndarray,
) -> np.ndarray:
    if params.off_mode is OffMode.BRAKE:
        return rk4.propagate(x0, forcing)
    states = np.empty((forcing.shape[0], 2))
    x = x0
    for on, start, stop in _runs(on_steps):
        if on:
            segment = rk4.propagate(x, forcing[start:stop])
        else:
            segment = rk4.coast(x, stop - start)
        logger.debug(
            f"{'Driven' if on else 'Coasting'} segment of {stop - start} steps"
        )
        states[start:stop] = segment
        x = segment[-1]
    return states


def _rest_tail(params: DcMotorParams, rk4: _Rk4, x_end: np.ndarray) -> np.ndarray:
    tau = params.off_time_constant()
    if tau is None:
        logger.warning(
            "Frictionless rotor in coast mode never comes to rest, no tail is added"
        )
        return np.empty((0, 2))
    chunk = math.ceil(_MIN_TAIL_TIME_CONSTANTS * tau / rk4.dt)
    parts = []
    x = x_end
    for _ in range(_MAX_TAIL_EXTENSIONS):
        forcing = np.zeros((chunk, 2))
        part = _integrate(params, rk4, x, forcing, np.zeros(chunk, dtype=bool))
        parts.append(part)
        x = part[-1]
        if abs(x[1]) < REST_OMEGA or not np.all(np.isfinite(x)):
            break
        chunk = math.ceil(_EXTRA_TAIL_TIME_CONSTANTS * tau / rk4.dt)
    else:
        logger.warning(f"Rotor still at {x[1]:.3g} rad/s after the settling tail")
    return np.concatenate(parts)


def check_step(params: DcMotorParams, dt: float):
    bound = params.max_step
    if not (math.isfinite(dt) and 0 < dt <= bound * (1 + 1e-9)):
        raise exceptions.StepSizeError.for_bound(dt, bound)


def _check_timeline(timeline: ActuationTimeline):
    asserts.assert_timeline(timeline)
    violations = validate(timeline)
    if violations:
        raise exceptions.InvalidArgumentError(
            f"Timeline is invalid: {violations[0].message} "
            f"({len(violations)} violation(s))"
        )


def simulate_channel(
    params: DcMotorParams,
    timeline: ActuationTimeline,
    channel: Channel,
    dt: float,
    tail_ms: Optional[float],
) -> TorqueProfile:
    params.validate()
    _check_timeline(timeline)
    check_step(params, dt)
    if tail_ms is not None and not tail_ms >= 0:
        raise exceptions.InvalidArgumentError(f"tail_ms must be >= 0, got {tail_ms}")

    steps = step_count(timeline.total_duration + (tail_ms or 0.0), dt)
    half = grid_points(2 * steps + 1, dt / 2)
    v0 = params.v_supply * render(timeline, channel, half[0:-1:2])
    vm = params.v_supply * render(timeline, channel, half[1::2])
    v1 = params.v_supply * render(timeline, channel, half[2::2], left_limit=True)
    on_steps = active_mask(timeline, channel, half[1::2])

    rk4 = _Rk4(params, dt)
    x0 = np.zeros(2)
    states = _integrate(params, rk4, x0, rk4.forcing(v0, vm, v1), on_steps)
    if tail_ms is None:
        x_end = states[-1] if len(states) else x0
        states = np.concatenate([states, _rest_tail(params, rk4, x_end)])
    states = np.concatenate([x0[None, :], states])
    if not np.all(np.isfinite(states)):
        raise exceptions.SimulationDivergedError(
            f"Motor state became non-finite with dt={dt:g} s"
        )
    logger.info(f"Simulated {len(states)} motor samples at dt={dt:g} s")

    omega = states[:, 1].copy()
    tau = np.zeros_like(omega)
    tau[1:] = -params.J * np.diff(omega) / dt
    return TorqueProfile(dt, omega, states[:, 0].copy(), tau)


def simulate_motor(
    params: DcMotorParams,
    timeline: ActuationTimeline,
    dt: float = DEFAULT_DT,
    tail_ms: Optional[float] = None,
) -> TorqueProfile:
    """Simulates the motor channel of ``timeline``.

    Parameters:

        params --
            The motor constants.

        timeline --
            A valid timeline; only its motor channel drives the motor.

        dt --
            Integration step in s, within ``(0, params.max_step]``.
            Default: 10 us.

        tail_ms --
            Time simulated after the timeline ends. Default None lets the rotor
            settle: at least 10 time constants of the off-mode dynamics and
            until ``|omega| < 1e-3 rad/s``.

    Returns:

        profile --
            A TorqueProfile whose casing torque is
            ``-J * (omega[k] - omega[k-1]) / dt`` with ``tau_casing[0] = 0``.

    Example::

        profile = simulate_motor(DcMotorParams(), schedule_rotation(spec))
    """
    return simulate_channel(params, timeline, Channel.MOTOR, dt, tail_ms)
