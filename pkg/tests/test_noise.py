import numpy as np
import pytest

from tensorltc.errors import ShapeError
from tensorltc.linear_code import hamming_distance
from tensorltc.noise import (
    bernoulli_channel,
    codeword_plus_errors,
    erase_planes,
    exact_errors_channel,
    planted_word,
    random_codeword,
    random_word,
)
from tensorltc.tensor_code import PlaneIndex, TensorWord


def test_exact_errors_distance_contract(cube3):
    word = random_word(cube3, 0)
    assert exact_errors_channel(word, 0, 1) == word
    for t in (1, 5, 27):
        noisy = exact_errors_channel(word, t, 1)
        assert hamming_distance(noisy.entries, word.entries) == t
    with pytest.raises(ShapeError):
        exact_errors_channel(word, 28, 1)


def test_exact_errors_deterministic(cube3):
    word = random_word(cube3, 2)
    assert exact_errors_channel(word, 3, 9) == exact_errors_channel(word, 3, 9)
    assert exact_errors_channel(word, 3, 9) != exact_errors_channel(word, 3, 10)


def test_exact_errors_nonbinary():
    from tensorltc.field import PrimeField

    word = TensorWord(PrimeField(5), np.zeros((4, 4), dtype=int))
    noisy = exact_errors_channel(word, 7, 3)
    assert hamming_distance(noisy.entries, word.entries) == 7
    assert noisy.entries.max() < 5


def test_bernoulli_flip_statistics(cube3):
    # total flips over 1000 seeded words ~ Binomial(27000, 1/2)
    total = 0
    for seed in range(1000):
        word = cube3.zero_word()
        noisy = bernoulli_channel(word, 0.5, seed)
        total += hamming_distance(noisy.entries, word.entries)
    mean = 27000 * 0.5
    sigma = np.sqrt(27000 * 0.25)
    assert abs(total - mean) <= 3 * sigma
    assert bernoulli_channel(cube3.zero_word(), 0.0, 1) == cube3.zero_word()


def test_erase_planes(cube3):
    word = random_codeword(cube3, 4)
    masked, sets = erase_planes(word, [PlaneIndex(1, 0), PlaneIndex(3, 2)])
    assert sets == ((1, 2), (0, 1, 2), (0, 1))
    assert not masked.entries[0].any()
    assert not masked.entries[:, :, 2].any()
    assert np.array_equal(masked.entries[1:, :, :2], word.entries[1:, :, :2])
    with pytest.raises(ShapeError):
        erase_planes(word, [PlaneIndex(5, 0)])


def test_random_codeword_membership(cube3):
    for seed in range(10):
        assert cube3.contains(random_codeword(cube3, seed))


def test_codeword_plus_errors(cube3):
    clean, noisy = codeword_plus_errors(cube3, 4, 8)
    assert cube3.contains(clean)
    assert hamming_distance(clean.entries, noisy.entries) == 4
    again = codeword_plus_errors(cube3, 4, 8)
    assert again[0] == clean and again[1] == noisy


def test_planted_word_deterministic_and_in_shape(cube3):
    a = planted_word(cube3, 3)
    b = planted_word(cube3, 3)
    assert a == b
    assert a.entries.shape == (3, 3, 3)
