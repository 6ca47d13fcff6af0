from __future__ import annotations

import numpy as np
import pytest

from plmc.core.rng import RngStream
from plmc.util.errors import ConfigError


def test_same_identity_replays():
    first = RngStream(7, 3)
    second = RngStream(7, 3)
    np.testing.assert_array_equal(first.standard_normal(5), second.standard_normal(5))
    np.testing.assert_array_equal(first.bernoulli.random(5), second.bernoulli.random(5))


def test_streams_are_distinct():
    assert not np.array_equal(RngStream(7, 0).standard_normal(4), RngStream(7, 1).standard_normal(4))
    assert not np.array_equal(RngStream(7, 0).standard_normal(4), RngStream(8, 0).standard_normal(4))


def test_bernoulli_draws_do_not_shift_gaussian_draws():
    plain = RngStream(11, 0)
    mixed = RngStream(11, 0)
    mixed.bernoulli.random(100)
    np.testing.assert_array_equal(plain.standard_normal(3), mixed.standard_normal(3))


def test_clone_restarts_and_copy_keeps_position():
    stream = RngStream(5, 2)
    stream.standard_normal(10)
    expected = stream.copy().standard_normal(3)
    np.testing.assert_array_equal(stream.standard_normal(3), expected)
    np.testing.assert_array_equal(stream.clone().standard_normal(2), RngStream(5, 2).standard_normal(2))
    assert stream.spawn(9).stream_id == 9


@pytest.mark.parametrize(("seed", "stream_id"), [(-1, 0), (2**64, 0), (0, -1)])
def test_rejects_out_of_range_identity(seed, stream_id):
    with pytest.raises(ConfigError):
        RngStream(seed, stream_id)
