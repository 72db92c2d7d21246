from abc import abstractmethod, ABC
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple
import logging

import numpy as np

from hapticpen import exceptions

logger = logging.getLogger(__name__)


class ExpansionAlgorithm(ABC):
    """
    Base class for an expansion algorithm.
    """

    @abstractmethod
    def __str__(self):
        "Returns a string representation of the expansion algorithm"

    @abstractmethod
    def expand(self, factors: Mapping[str, Sequence[Any]]) -> List[Dict[str, Any]]:
        "Returns the cells of the design"


class FullFactorial(ExpansionAlgorithm):
    """Full-factorial expansion class.
    Creates all possible combinations of the factor levels, the last factor
    varying fastest.

    Will return a single empty cell if no factors are given.

    Observe that the size of a design with FullFactorial expansion is the product
    of the numbers of levels.
    """

    def __str__(self):
        return "FULLFACTORIAL"

    def expand(self, factors: Mapping[str, Sequence[Any]]) -> List[Dict[str, Any]]:
        for name, levels in factors.items():
            if len(levels) == 0:
                raise exceptions.InvalidArgumentError(f"Factor '{name}' has no levels")
        names = list(factors)
        return [dict(zip(names, combo)) for combo in product(*factors.values())]


@dataclass(frozen=True)
class Trial:
    conditions: Dict[str, Any] = field(hash=False)
    repetition: int
    session: int


@dataclass(frozen=True)
class TrialSchedule:
    """Ordered trials plus the index where each session starts."""

    trials: Tuple[Trial, ...]
    session_starts: Tuple[int, ...]

    def __len__(self):
        return len(self.trials)

    def __iter__(self):
        return iter(self.trials)

    def session(self, index: int) -> Tuple[Trial, ...]:
        starts = self.session_starts + (len(self.trials),)
        return self.trials[starts[index]:starts[index + 1]]

    @property
    def session_count(self) -> int:
        return len(self.session_starts)


def split_repetitions(repetitions: int, sessions: int) -> List[List[int]]:
    """Distributes repetitions over sessions as evenly as possible, earlier
    sessions taking the remainder."""
    if sessions < 1 or repetitions < sessions:
        raise exceptions.InvalidArgumentError(
            f"Cannot split {repetitions} repetitions into {sessions} sessions"
        )
    return [chunk.tolist() for chunk in np.array_split(np.arange(repetitions), sessions)]


def build_schedule(
    factors: Mapping[str, Sequence[Any]],
    repetitions: int,
    sessions: int,
    rng: np.random.Generator,
    expansion: Optional[ExpansionAlgorithm] = None,
) -> TrialSchedule:
    """Full factorial x repetitions, shuffled within each session.

    Every cell appears once per repetition, so each session is balanced over
    all factors, directions included.

    Example::

        schedule = build_schedule(
            {"d_ms": [50, 100], "direction": ["tip-to-end", "end-to-tip"]},
            repetitions=10,
            sessions=2,
            rng=np.random.default_rng(0),
        )
    """
    expansion = FullFactorial() if expansion is None else expansion
    cells = expansion.expand(factors)
    trials: List[Trial] = []
    starts = []
    for session, reps in enumerate(split_repetitions(repetitions, sessions)):
        starts.append(len(trials))
        block = [Trial(cell, rep, session) for rep in reps for cell in cells]
        trials.extend(block[i] for i in rng.permutation(len(block)))
    logger.debug(f"Built {len(trials)} trials in {sessions} sessions")
    return TrialSchedule(tuple(trials), tuple(starts))
