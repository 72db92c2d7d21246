import logging
from typing import IO, Optional, Union
from pathlib import Path

import pandas as pd

from hapticpen import asserts
from hapticpen.effects.timeline import CHANNELS, TICK_MS, ActuationTimeline, grid_times, render

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6f"


def timeline_to_frame(timeline: ActuationTimeline) -> pd.DataFrame:
    """One row per tick from 0 to ``total_duration`` with the drive level of
    every channel."""
    asserts.assert_timeline(timeline)
    times = grid_times(timeline.total_duration, timeline.tick / 1000.0)
    columns = {"t_ms": times}
    for channel in CHANNELS:
        # + 0.0 turns -0.0 into 0.0 so the CSV never prints "-0.000000".
        columns[channel.value] = render(timeline, channel, times) + 0.0
    return pd.DataFrame(columns)


def write_frame_csv(
    frame: pd.DataFrame, out: Optional[Union[str, Path, IO[str]]] = None
) -> Optional[str]:
    """Writes ``frame`` with fixed-point 6 decimals. Returns the text if ``out``
    is None."""
    return frame.to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_timeline_csv(
    timeline: ActuationTimeline, out: Optional[Union[str, Path, IO[str]]] = None
) -> Optional[str]:
    """Writes the timeline CSV ``t_ms,vibe_tip,vibe_end,motor``.

    Example::

        write_timeline_csv(schedule_rotation(spec), "rotation.csv")
    """
    frame = timeline_to_frame(timeline)
    logger.debug(f"Exporting {len(frame)} timeline rows at {TICK_MS} ms")
    return write_frame_csv(frame, out)
