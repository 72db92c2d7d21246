import logging
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd

from hapticpen import exceptions
from hapticpen.effects.export import write_frame_csv

logger = logging.getLogger(__name__)


def _format_level(value) -> str:
    if isinstance(value, (float, np.floating)) and float(value).is_integer():
        return str(int(value))
    return str(value)


class ExperimentResult:
    """Per-participant response percentages of one experiment.

    ``cells`` has the columns ``cell_keys..., participant_id, percent``. The
    summary pools each condition (the ``summary_keys`` columns) over the
    remaining cell keys per participant, then reports mean, SD and n over
    participants.

    Example::

        result = run_experiment3(panel)
        result.summary()
        result.pooled(["on_ms", "off_ms", "shape"])
    """

    def __init__(
        self,
        name: str,
        cells: pd.DataFrame,
        cell_keys: Sequence[str],
        summary_keys: Sequence[str],
        trials_per_participant: int,
    ):
        missing = set(cell_keys) - set(cells.columns)
        if missing or "percent" not in cells.columns:
            raise exceptions.InvalidArgumentError(
                f"Result frame lacks columns: {sorted(missing | {'percent'})}"
            )
        if ((cells["percent"] < 0) | (cells["percent"] > 100)).any():
            raise exceptions.InvalidArgumentError("Percentages must lie in [0, 100]")
        self._name = name
        self._cell_keys = list(cell_keys)
        self._summary_keys = list(summary_keys)
        self._trials = trials_per_participant
        columns = self._cell_keys + ["participant_id", "percent"]
        self._cells = (
            cells[columns].sort_values(columns[:-1], kind="mergesort").reset_index(drop=True)
        )

    def __repr__(self):
        return f"ExperimentResult('{self._name}', participants={len(self.participants)})"

    @property
    def name(self) -> str:
        return self._name

    @property
    def cell_keys(self) -> List[str]:
        return list(self._cell_keys)

    @property
    def cells(self) -> pd.DataFrame:
        return self._cells.copy()

    @property
    def participants(self) -> List[int]:
        return sorted(self._cells["participant_id"].unique().tolist())

    @property
    def trials_per_participant(self) -> int:
        return self._trials

    def pooled(self, keys: Sequence[str]) -> pd.Series:
        """Mean percentage per combination of ``keys``, over participants and
        the other cell keys."""
        return self._cells.groupby(list(keys))["percent"].mean()

    def per_participant(self, keys: Sequence[str]) -> pd.DataFrame:
        """Participants x conditions matrix of percentages pooled over the
        cell keys not in ``keys``."""
        table = self._cells.groupby(["participant_id", *keys])["percent"].mean()
        return table.unstack(list(keys))

    def summary(self) -> pd.DataFrame:
        """``condition,mean,sd,n`` with one row per summary condition."""
        per_participant = (
            self._cells.groupby(self._summary_keys + ["participant_id"])["percent"]
            .mean()
            .reset_index()
        )
        grouped = per_participant.groupby(self._summary_keys)["percent"]
        summary = grouped.agg(["mean", "std", "count"]).reset_index()
        summary["std"] = summary["std"].fillna(0.0)
        conditions = [
            " ".join(f"{k}={_format_level(row[k])}" for k in self._summary_keys)
            for _, row in summary.iterrows()
        ]
        return pd.DataFrame(
            {
                "condition": conditions,
                "mean": summary["mean"].to_numpy(),
                "sd": summary["std"].to_numpy(),
                "n": summary["count"].to_numpy(),
            }
        )

    def write_csv(self, directory: Union[str, Path]) -> List[Path]:
        """Writes ``<name>_cells.csv`` and ``<name>_summary.csv`` into
        ``directory`` and returns their paths."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        cells_path = directory / f"{self._name}_cells.csv"
        summary_path = directory / f"{self._name}_summary.csv"
        write_frame_csv(self._cells, cells_path)
        write_frame_csv(self.summary(), summary_path)
        logger.info(f"Wrote {cells_path} and {summary_path}")
        return [cells_path, summary_path]

    def summary_text(self) -> str:
        return self.summary().to_string(index=False, float_format=lambda v: f"{v:.2f}")
