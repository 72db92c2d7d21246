import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from hapticpen import exceptions
from hapticpen.effects.movement import PerceptRegionTable
from hapticpen.effects.rotation import RotationPerceptTable

logger = logging.getLogger(__name__)

_PANEL_STREAM = 0
_OFFSET_LIMIT_SIGMAS = 2.0


@dataclass(frozen=True)
class ParticipantModel:
    """A simulated participant.

    ``offset`` shifts every probability of the perceiver tables, modelling a
    more or less sensitive person.
    """

    participant_id: int
    seed: int
    offset: float = 0.0

    def rng(self, *stream: int) -> np.random.Generator:
        """Independent generator for one experiment of this participant."""
        return np.random.default_rng([self.seed, self.participant_id, *stream])

    def movement_table(self, table: PerceptRegionTable) -> PerceptRegionTable:
        return table.perturbed(self.offset) if self.offset else table

    def rotation_table(self, table: RotationPerceptTable) -> RotationPerceptTable:
        return table.perturbed(self.offset) if self.offset else table


def make_panel(count: int, seed: int, sigma_subj: float) -> List[ParticipantModel]:
    """Builds ``count`` participants with antithetic sensitivity offsets.

    Offsets are drawn from N(0, sigma_subj) limited to two sigma and handed
    out as +delta, -delta pairs; an odd panel ends with an unbiased
    participant.

    Example::

        panel = make_panel(15, seed=42, sigma_subj=0.05)
    """
    if count < 1:
        raise exceptions.InvalidArgumentError(f"Need at least one participant, got {count}")
    if sigma_subj < 0:
        raise exceptions.InvalidArgumentError(f"sigma_subj must be >= 0, got {sigma_subj}")
    rng = np.random.default_rng([seed, _PANEL_STREAM])
    limit = _OFFSET_LIMIT_SIGMAS * sigma_subj
    deltas = np.clip(rng.normal(0.0, 1.0, count // 2) * sigma_subj, -limit, limit)
    offsets: List[float] = []
    for delta in deltas:
        offsets.extend((float(delta), float(-delta)))
    if count % 2:
        offsets.append(0.0)
    panel = [ParticipantModel(pid, seed, offset) for pid, offset in enumerate(offsets)]
    logger.debug(f"Panel of {count} participants, offsets {offsets}")
    return panel

