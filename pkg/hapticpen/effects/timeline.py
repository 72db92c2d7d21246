"""Channels, pulses and actuation timelines shared by every effect.

A timeline is an immutable schedule of pulses per channel. Pulse intervals are
half-open, ``[start, start + on_duration)``, and all boundaries live on a
0.1 ms command grid.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from hapticpen import exceptions

logger = logging.getLogger(__name__)

TICK_MS = 0.1
TICKS_PER_MS = 10
_GRID_TOLERANCE = 1e-6


class Channel(enum.Enum):
    """
    Class representing an enumeration for the three actuation channels of
    the stylus.
    """

    VIBE_TIP = "vibe_tip"
    VIBE_END = "vibe_end"
    MOTOR = "motor"

    @property
    def signed(self) -> bool:
        """True for the channel whose pulses carry a polarity."""
        return self is Channel.MOTOR


CHANNELS = (Channel.VIBE_TIP, Channel.VIBE_END, Channel.MOTOR)


class WaveformShape(enum.Enum):
    """
    Class representing an enumeration for the on-time envelope of a pulse.
    """

    SQUARE = "square"
    INCREASING_RAMP = "inc"
    DECREASING_RAMP = "dec"

    def envelope(self, u):
        """Envelope at normalized on-time position ``u`` in [0, 1).

        Accepts a float or a numpy array and returns the same kind.
        """
        if self is WaveformShape.SQUARE:
            return np.ones_like(u) if isinstance(u, np.ndarray) else 1.0
        if self is WaveformShape.INCREASING_RAMP:
            return u
        return 1.0 - u


@dataclass(frozen=True)
class Pulse:
    """A single drive pulse.

    Parameters:

        start --
            Onset in ms.

        on_duration --
            On-time in ms.

        amplitude --
            Normalized drive level in (0, 1].

        shape --
            The on-time envelope. Default: WaveformShape.SQUARE.

        polarity --
            +1 or -1. Only the motor channel honours it.
    """

    start: float
    on_duration: float
    amplitude: float = 1.0
    shape: WaveformShape = WaveformShape.SQUARE
    polarity: int = 1

    @property
    def end(self) -> float:
        return self.start + self.on_duration

    def contains(self, t: float) -> bool:
        return self.start <= t < self.end


class ViolationKind(enum.Enum):
    NEGATIVE_TIME = "negative_time"
    NON_POSITIVE_DURATION = "non_positive_duration"
    AMPLITUDE_RANGE = "amplitude_range"
    POLARITY = "polarity"
    OFF_GRID = "off_grid"
    UNSORTED = "unsorted"
    OVERLAP = "overlap"
    EXCEEDS_DURATION = "exceeds_duration"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    channel: Optional[Channel]
    pulse_index: Optional[int]
    message: str
    other_index: Optional[int] = None


def as_channel(channel: Union[Channel, str]) -> Channel:
    if isinstance(channel, Channel):
        return channel
    if isinstance(channel, str):
        try:
            return Channel(channel.lower().replace("-", "_"))
        except ValueError:
            pass
    raise exceptions.InvalidChannelError.for_value(channel)


def snap(ms: float) -> float:
    """Rounds a time in ms to the nearest command tick."""
    return round(ms * TICKS_PER_MS) / TICKS_PER_MS


@dataclass(frozen=True)
class ActuationTimeline:
    """
    Immutable per-channel pulse schedule.

    Build instances with ``ActuationTimeline.build``; the raw constructor takes
    one pulse tuple per channel in ``CHANNELS`` order.

    Examples::

        timeline = ActuationTimeline.build(
            {Channel.MOTOR: [Pulse(0.0, 200.0, polarity=-1)]}, total_duration=400.0
        )
        timeline.pulses(Channel.MOTOR)
    """

    channel_pulses: Tuple[Tuple[Pulse, ...], Tuple[Pulse, ...], Tuple[Pulse, ...]]
    total_duration: float
    tick: float = TICK_MS

    @classmethod
    def build(
        cls,
        pulses: Optional[Mapping[Channel, Iterable[Pulse]]] = None,
        total_duration: Optional[float] = None,
    ) -> 'ActuationTimeline':
        pulses = {} if pulses is None else pulses
        per_channel: Dict[Channel, Tuple[Pulse, ...]] = {
            as_channel(channel): tuple(items) for channel, items in pulses.items()
        }
        channel_pulses = tuple(per_channel.get(channel, ()) for channel in CHANNELS)
        if total_duration is None:
            total_duration = max(
                (pulse.end for items in channel_pulses for pulse in items), default=0.0
            )
        return cls(channel_pulses, float(total_duration))  # type: ignore[arg-type]

    @classmethod
    def empty(cls, total_duration: float = 0.0) -> 'ActuationTimeline':
        return cls.build({}, total_duration)

    def pulses(self, channel: Union[Channel, str]) -> Tuple[Pulse, ...]:
        return self.channel_pulses[CHANNELS.index(as_channel(channel))]

    @property
    def end(self) -> float:
        """End of the last pulse over all channels, 0 when empty."""
        return max(
            (pulse.end for items in self.channel_pulses for pulse in items),
            default=0.0,
        )

    def is_empty(self) -> bool:
        return not any(self.channel_pulses)


def sample(
    timeline: ActuationTimeline, channel: Union[Channel, str], t: float
) -> float:
    """Signed drive level of ``channel`` at time ``t`` (ms).

    Returns 0 outside every pulse; inside a pulse the value is
    ``polarity * (envelope(u) * amplitude)`` with ``u = (t - start) / on``.
    """
    channel = as_channel(channel)
    if t < 0:
        raise exceptions.InvalidArgumentError(f"Sample time must be >= 0, got {t}")
    for pulse in timeline.pulses(channel):
        if pulse.contains(t):
            u = (t - pulse.start) / pulse.on_duration
            sign = pulse.polarity if channel.signed else 1
            return sign * (pulse.shape.envelope(u) * pulse.amplitude)
    return 0.0


def render(
    timeline: ActuationTimeline,
    channel: Union[Channel, str],
    times: np.ndarray,
    left_limit: bool = False,
) -> np.ndarray:
    """Vectorized ``sample`` over an array of times in ms.

    Every element is bit-identical to ``sample(timeline, channel, t)``. With
    ``left_limit`` the pulse intervals are taken as ``(start, end]``, giving the
    drive level just before each time instead.
    """
    channel = as_channel(channel)
    times = np.asarray(times, dtype=float)
    out = np.zeros_like(times)
    # Reverse order so that the first matching pulse wins, as in sample().
    for pulse in reversed(timeline.pulses(channel)):
        if left_limit:
            mask = (times > pulse.start) & (times <= pulse.end)
        else:
            mask = (times >= pulse.start) & (times < pulse.end)
        if not mask.any():
            continue
        u = (times[mask] - pulse.start) / pulse.on_duration
        sign = pulse.polarity if channel.signed else 1
        out[mask] = sign * (pulse.shape.envelope(u) * pulse.amplitude)
    return out


def active_mask(
    timeline: ActuationTimeline, channel: Union[Channel, str], times: np.ndarray
) -> np.ndarray:
    """Boolean array, True where ``times`` fall inside a pulse of ``channel``."""
    times = np.asarray(times, dtype=float)
    mask = np.zeros(times.shape, dtype=bool)
    for pulse in timeline.pulses(channel):
        mask |= (times >= pulse.start) & (times < pulse.end)
    return mask


def grid_times(duration_ms: float, dt: float) -> np.ndarray:
    """Sample times in ms for a uniform grid of step ``dt`` seconds.

    The grid has ``ceil(duration_ms / dt_ms) + 1`` points. When ``1 / dt_ms`` is
    an integer the points are computed as ``k / rate`` so that decimal pulse
    boundaries (e.g. 50.3 ms) coincide exactly with grid points.
    """
    return grid_points(step_count(duration_ms, dt) + 1, dt)


def step_count(duration_ms: float, dt: float) -> int:
    """Number of ``dt`` second steps needed to cover ``duration_ms``."""
    if dt <= 0:
        raise exceptions.InvalidArgumentError(f"Step must be > 0, got {dt}")
    return max(math.ceil(duration_ms / (dt * 1000.0) - 1e-9), 0)


def grid_points(count: int, dt: float) -> np.ndarray:
    """The first ``count`` points ``k * dt`` of a uniform grid, in ms."""
    if dt <= 0:
        raise exceptions.InvalidArgumentError(f"Step must be > 0, got {dt}")
    dt_ms = dt * 1000.0
    rate = 1.0 / dt_ms
    rounded = round(rate)
    if rounded >= 1 and abs(rate - rounded) <= 1e-9 * rate:
        return np.arange(count) / float(rounded)
    return np.arange(count) * dt_ms


def quantize(
    timeline: ActuationTimeline, channel: Union[Channel, str], dt: float
) -> np.ndarray:
    """Drive samples of ``channel`` on the grid returned by ``grid_times``.

    Parameters:

        timeline --
            The timeline to sample.

        channel --
            Channel to sample.

        dt --
            Step in seconds. Must be > 0; steps coarser than the 0.1 ms tick
            are accepted but alias pulse edges.

    Returns:

        samples --
            ``ceil(total_duration / dt) + 1`` drive levels.
    """
    channel = as_channel(channel)
    if dt <= 0:
        raise exceptions.InvalidArgumentError(f"Step must be > 0, got {dt}")
    if dt * 1000.0 > timeline.tick * (1 + 1e-9):
        logger.warning(
            f"Quantization step {dt * 1000.0:g} ms is coarser than the "
            f"{timeline.tick:g} ms tick, pulse edges will alias"
        )
    return render(timeline, channel, grid_times(timeline.total_duration, dt))


def _on_grid(value: float, tick: float) -> bool:
    ticks = value / tick
    return abs(ticks - round(ticks)) <= _GRID_TOLERANCE


def _validate_channel(
    channel: Channel, pulses: Sequence[Pulse], timeline: ActuationTimeline
) -> List[Violation]:
    violations = []
    for index, pulse in enumerate(pulses):
        if pulse.start < 0:
            violations.append(
                Violation(
                    ViolationKind.NEGATIVE_TIME,
                    channel,
                    index,
                    f"pulse starts at {pulse.start} ms",
                )
            )
        if not pulse.on_duration > 0:
            violations.append(
                Violation(
                    ViolationKind.NON_POSITIVE_DURATION,
                    channel,
                    index,
                    f"on-time is {pulse.on_duration} ms",
                )
            )
        if not 0 < pulse.amplitude <= 1:
            violations.append(
                Violation(
                    ViolationKind.AMPLITUDE_RANGE,
                    channel,
                    index,
                    f"amplitude {pulse.amplitude} is outside (0, 1]",
                )
            )
        if pulse.polarity not in (1, -1):
            violations.append(
                Violation(
                    ViolationKind.POLARITY,
                    channel,
                    index,
                    f"polarity {pulse.polarity} is not +1 or -1",
                )
            )
        for name, boundary in (("start", pulse.start), ("end", pulse.end)):
            if not _on_grid(boundary, timeline.tick):
                violations.append(
                    Violation(
                        ViolationKind.OFF_GRID,
                        channel,
                        index,
                        f"{name} {boundary} ms is not a multiple of "
                        f"{timeline.tick} ms",
                    )
                )
        if pulse.end > timeline.total_duration + _GRID_TOLERANCE:
            violations.append(
                Violation(
                    ViolationKind.EXCEEDS_DURATION,
                    channel,
                    index,
                    f"pulse ends at {pulse.end} ms after the timeline end "
                    f"{timeline.total_duration} ms",
                )
            )
        if index > 0 and pulse.start < pulses[index - 1].start:
            violations.append(
                Violation(
                    ViolationKind.UNSORTED,
                    channel,
                    index,
                    "pulse starts before its predecessor",
                    other_index=index - 1,
                )
            )

    order = sorted(range(len(pulses)), key=lambda i: pulses[i].start)
    for previous, current in zip(order, order[1:]):
        if pulses[current].start < pulses[previous].end - _GRID_TOLERANCE:
            violations.append(
                Violation(
                    ViolationKind.OVERLAP,
                    channel,
                    current,
                    f"pulse overlaps pulse {previous}",
                    other_index=previous,
                )
            )
    return violations


def validate(timeline: ActuationTimeline) -> List[Violation]:
    """Returns every invariant violation of ``timeline``.

    An empty list means the timeline is valid. Violations are data, this
    function never raises.
    """
    violations = []
    if timeline.total_duration < 0:
        violations.append(
            Violation(
                ViolationKind.NEGATIVE_TIME,
                None,
                None,
                f"total duration is {timeline.total_duration} ms",
            )
        )
    for channel in CHANNELS:
        violations.extend(_validate_channel(channel, timeline.pulses(channel), timeline))
    return violations


def is_valid(timeline: ActuationTimeline) -> bool:
    return not validate(timeline)
