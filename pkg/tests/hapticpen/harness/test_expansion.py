from collections import Counter

import numpy as np
import pytest

from hapticpen import exceptions
from hapticpen.harness.expansion import FullFactorial, build_schedule, split_repetitions


class TestFullFactorial:
    def test_last_factor_varies_fastest(self):
        cells = FullFactorial().expand({"a": [1, 2], "b": ["x", "y", "z"]})
        assert cells[:3] == [{"a": 1, "b": "x"}, {"a": 1, "b": "y"}, {"a": 1, "b": "z"}]
        assert len(cells) == 6

    def test_no_factors(self):
        assert FullFactorial().expand({}) == [{}]

    def test_empty_factor(self):
        pytest.raises(exceptions.InvalidArgumentError, FullFactorial().expand, {"a": []})

    def test_str(self):
        assert str(FullFactorial()) == "FULLFACTORIAL"


def test_split_repetitions():
    assert split_repetitions(10, 3) == [[0, 1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert split_repetitions(10, 1) == [list(range(10))]


@pytest.mark.parametrize("repetitions,sessions", [(2, 3), (5, 0)])
def test_split_repetitions_invalid(repetitions, sessions):
    pytest.raises(exceptions.InvalidArgumentError, split_repetitions, repetitions, sessions)


class TestBuildSchedule:
    factors = {"d_ms": [50, 100], "direction": ["tip-to-end", "end-to-tip"]}

    def test_every_cell_once_per_repetition(self):
        schedule = build_schedule(self.factors, 10, 2, np.random.default_rng(0))
        assert len(schedule) == 40
        counts = Counter((t.conditions["d_ms"], t.conditions["direction"]) for t in schedule)
        assert set(counts.values()) == {10}

    def test_sessions_are_balanced(self):
        schedule = build_schedule(self.factors, 10, 2, np.random.default_rng(0))
        assert schedule.session_starts == (0, 20)
        assert schedule.session_count == 2
        for index in range(2):
            trials = schedule.session(index)
            assert {t.session for t in trials} == {index}
            directions = Counter(t.conditions["direction"] for t in trials)
            assert directions["tip-to-end"] == directions["end-to-tip"] == 10

    def test_is_shuffled_deterministically(self):
        first = build_schedule(self.factors, 10, 2, np.random.default_rng(5))
        second = build_schedule(self.factors, 10, 2, np.random.default_rng(5))
        assert first == second
        ordered = [(t.repetition, t.conditions["d_ms"]) for t in first]
        assert ordered != sorted(ordered)
