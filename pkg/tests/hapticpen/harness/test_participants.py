import numpy as np
import pytest

from hapticpen import exceptions
from hapticpen.harness.participants import ParticipantModel, make_panel
from tests.hapticpen.fixtures import *


class TestMakePanel:
    def test_offsets_are_antithetic(self):
        panel = make_panel(10, seed=3, sigma_subj=0.05)
        offsets = [p.offset for p in panel]
        assert [p.participant_id for p in panel] == list(range(10))
        for plus, minus in zip(offsets[0::2], offsets[1::2]):
            assert plus == -minus
        assert sum(offsets) == pytest.approx(0.0, abs=1e-15)

    def test_offsets_are_limited_to_two_sigma(self):
        panel = make_panel(200, seed=3, sigma_subj=0.05)
        assert max(abs(p.offset) for p in panel) <= 0.1

    def test_odd_panel_ends_unbiased(self):
        panel = make_panel(15, seed=42, sigma_subj=0.05)
        assert panel[-1].offset == 0.0

    def test_no_spread(self):
        assert {p.offset for p in make_panel(4, seed=1, sigma_subj=0.0)} == {0.0}

    def test_deterministic(self):
        assert make_panel(6, seed=9, sigma_subj=0.05) == make_panel(6, seed=9, sigma_subj=0.05)
        assert make_panel(6, seed=9, sigma_subj=0.05) != make_panel(6, seed=10, sigma_subj=0.05)

    @pytest.mark.parametrize("count,sigma", [(0, 0.05), (5, -0.1)])
    def test_invalid(self, count, sigma):
        pytest.raises(exceptions.InvalidArgumentError, make_panel, count, 0, sigma)


class TestParticipantModel:
    def test_streams_are_independent_and_repeatable(self):
        participant = ParticipantModel(3, seed=11)
        first = participant.rng(1).random(4)
        np.testing.assert_array_equal(first, participant.rng(1).random(4))
        assert not np.array_equal(first, participant.rng(2).random(4))

    def test_unbiased_participant_keeps_the_tables(self, percept_table, rotation_table):
        participant = ParticipantModel(0, seed=1)
        assert participant.movement_table(percept_table) is percept_table
        assert participant.rotation_table(rotation_table) is rotation_table

    def test_offset_shifts_rotation_table(self, rotation_table):
        participant = ParticipantModel(0, seed=1, offset=-0.1)
        shifted = participant.rotation_table(rotation_table)
        assert shifted is not rotation_table
