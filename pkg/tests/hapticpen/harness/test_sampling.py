import numpy as np
import pytest

from hapticpen import exceptions
from hapticpen.harness.sampling import (
    LatentDraw,
    paired_stratified_uniforms,
    stratified_uniforms,
)
from tests.hapticpen.fixtures import *


def test_latent_draw_is_a_uniform_source():
    draw = LatentDraw(0.25)
    assert draw.random() == 0.25
    assert draw.random() == 0.25


def test_one_uniform_per_stratum(rng):
    u = stratified_uniforms(rng, 10)
    np.testing.assert_array_equal(np.floor(np.sort(u) * 10), np.arange(10))


def test_paired_vectors_each_cover_the_strata(rng):
    first, second = paired_stratified_uniforms(rng, 10)
    for vector in (first, second):
        np.testing.assert_array_equal(np.floor(np.sort(vector) * 10), np.arange(10))
    assert not np.array_equal(first, second)


@pytest.mark.parametrize("sampler", [stratified_uniforms, paired_stratified_uniforms])
def test_at_least_one_stratum(rng, sampler):
    pytest.raises(exceptions.InvalidArgumentError, sampler, rng, 0)
