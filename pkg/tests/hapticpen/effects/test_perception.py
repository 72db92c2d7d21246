import numpy as np
import pytest

from hapticpen import exceptions
from hapticpen.effects.perception import bilinear, check_axis, draw_bernoulli, draw_index
from hapticpen.harness.sampling import LatentDraw


def test_bilinear_center_is_mean_of_corners():
    values = np.array([[0.0, 1.0], [2.0, 3.0]])
    assert bilinear(np.array([0.0, 1.0]), np.array([0.0, 1.0]), values, 0.5, 0.5) == 1.5


def test_bilinear_hits_grid_points_exactly():
    axis = np.array([25.0, 75.0, 175.0])
    values = np.arange(9.0).reshape(3, 3) / 10
    assert bilinear(axis, axis, values, 175.0, 75.0) == values[2, 1]


def test_check_axis():
    assert check_axis("x", [1, 2, 3]).dtype == float
    pytest.raises(exceptions.InvalidTableError, check_axis, "x", [1])
    pytest.raises(exceptions.InvalidTableError, check_axis, "x", [1, 1])
    pytest.raises(exceptions.InvalidTableError, check_axis, "x", [1, np.nan])


def test_draw_index_uses_cumulative_bounds():
    probabilities = (0.2, 0.5, 0.3)
    assert draw_index(probabilities, LatentDraw(0.0)) == 0
    assert draw_index(probabilities, LatentDraw(0.2)) == 1
    assert draw_index(probabilities, LatentDraw(0.69)) == 1
    assert draw_index(probabilities, LatentDraw(0.71)) == 2
    assert draw_index((0.5, 0.5, 0.0), LatentDraw(0.9999999999)) == 1


def test_draw_bernoulli():
    assert draw_bernoulli(0.9, LatentDraw(0.89))
    assert not draw_bernoulli(0.9, LatentDraw(0.9))
