import numpy as np
import pytest

from evomlp.rng import Purpose, stream


def test_same_key_replays_identically():
    a = stream(42, 3, 7, Purpose.OPERATOR).random(100)
    b = stream(42, 3, 7, Purpose.OPERATOR).random(100)
    assert np.array_equal(a, b)


def test_member_index_separates_streams():
    a = stream(42, 3, 7, Purpose.OPERATOR).random(1000)
    b = stream(42, 3, 8, Purpose.OPERATOR).random(1000)
    assert not np.array_equal(a, b)
    assert np.sum(a == b) == 0


def test_generation_and_purpose_separate_streams():
    base = stream(1, 0, 0, Purpose.OPERATOR).random(1000)
    other_gen = stream(1, 1, 0, Purpose.OPERATOR).random(1000)
    other_purpose = stream(1, 0, 0, Purpose.INIT).random(1000)
    other_seed = stream(2, 0, 0, Purpose.OPERATOR).random(1000)
    for other in (other_gen, other_purpose, other_seed):
        assert not np.array_equal(base, other)


def test_negative_and_large_seeds_accepted():
    a = stream(-1, 0, 0, Purpose.INIT).random(10)
    b = stream((1 << 64) - 1, 0, 0, Purpose.INIT).random(10)
    assert np.array_equal(a, b)  # -1 wraps to the same 64-bit word


def test_invalid_keys_rejected():
    with pytest.raises(ValueError):
        stream(0, -1, 0, Purpose.INIT)
    with pytest.raises(ValueError):
        stream(0, 0, -1, Purpose.INIT)


def test_pooled_draws_uniform_over_deciles():
    draws = np.concatenate(
        [stream(7, gen, member, Purpose.OPERATOR).random(10_000)
         for gen in range(10) for member in range(10)]
    )
    assert draws.shape[0] == 1_000_000
    counts, _ = np.histogram(draws, bins=10, range=(0.0, 1.0))
    frequencies = counts / draws.shape[0]
    assert np.all(frequencies >= 0.099)
    assert np.all(frequencies <= 0.101)
