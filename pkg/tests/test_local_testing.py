from fractions import Fraction

import numpy as np
import pytest

from tensorltc.errors import ShapeError
from tensorltc.linear_code import parity_code, repetition_code
from tensorltc.local_testing import (
    ComposedTester,
    PlaneTester,
    composed_robustness_bound,
    is_square_member,
    rejection_probability_exact,
    rejection_probability_sampled,
    robustness_exact,
    robustness_lower_bound,
)
from tensorltc.noise import random_word
from tensorltc.tensor_code import TensorCode, TensorWord


def single_flip(code):
    entries = code.zero_word().entries.copy()
    entries[(0,) * code.m] = 1
    return TensorWord(code.field, entries)


def test_plane_tester_requires_three_axes(parity3):
    with pytest.raises(ShapeError):
        PlaneTester(TensorCode(parity3, 2))


def test_plane_enumeration(cube3, cube4):
    assert len(PlaneTester(cube3).planes()) == 9
    assert len(PlaneTester(cube4).planes()) == 12
    restricted = PlaneTester(cube4, axis_mode="first-three")
    assert {pl.axis for pl in restricted.planes()} == {1, 2, 3}


def test_sample_determinism(cube3):
    tester = PlaneTester(cube3)
    a = tester.sample(np.random.default_rng(42))
    b = tester.sample(np.random.default_rng(42))
    assert a == b


def test_sample_uniformity_chi_square(cube3):
    tester = PlaneTester(cube3)
    rng = np.random.default_rng(0)
    counts = {pl: 0 for pl in tester.planes()}
    draws = 9000
    for _ in range(draws):
        counts[tester.sample(rng)] += 1
    expected = draws / 9
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 30  # 8 degrees of freedom; far tail


def test_robustness_lower_bound_values(parity3):
    assert robustness_lower_bound(TensorCode(parity3, 3)) == Fraction(4, 243)
    assert robustness_lower_bound(TensorCode(repetition_code(3), 3)) == Fraction(1, 18)
    assert robustness_lower_bound(TensorCode(parity_code(4), 4)) == Fraction(1, 512)


def test_composed_bound_is_stage_product(parity3):
    assert composed_robustness_bound(TensorCode(parity3, 3)) == Fraction(4, 243)
    expected = robustness_lower_bound(TensorCode(parity3, 4)) * Fraction(4, 243)
    assert composed_robustness_bound(TensorCode(parity3, 4)) == expected


def test_robustness_exact_on_codeword(cube3):
    rng = np.random.default_rng(6)
    word = cube3.encode(rng.integers(0, 2, size=8))
    assert robustness_exact(word, cube3) == 0


def test_robustness_exact_single_flip(cube3):
    # three planes see the flip at local distance 1/9 each
    assert robustness_exact(single_flip(cube3), cube3) == Fraction(1, 27)


def test_robustness_bound_on_random_words(cube3):
    bound = robustness_lower_bound(cube3)
    for seed in range(100):
        word = random_word(cube3, seed)
        delta = Fraction(cube3.distance_to(word), cube3.blocklength)
        assert robustness_exact(word, cube3) >= bound * delta


def test_first_three_axis_mode_changes_average(cube4):
    # a flip is seen by 4 of 12 planes in all-axes mode, 3 of 9 otherwise
    word = single_flip(cube4)
    assert robustness_exact(word, cube4, "all") == Fraction(4, 12 * 27)
    assert robustness_exact(word, cube4, "first-three") == Fraction(3, 9 * 27)


def test_composed_view_m3_is_single_plane(cube3):
    word = single_flip(cube3)
    tester = ComposedTester(cube3)
    outcome = tester.sample_view(word, np.random.default_rng(1), with_distance=True)
    assert len(outcome.fixed) == 1
    axis, coord = next(iter(outcome.fixed.items()))
    view = np.take(word.entries, coord, axis=axis - 1)
    assert np.array_equal(outcome.view.entries, view)
    assert outcome.consistent == (outcome.local_distance == 0)


def test_composed_view_m4_size_contract(cube4):
    word = random_word(cube4, 3)
    tester = ComposedTester(cube4)
    outcome = tester.sample_view(word, np.random.default_rng(5))
    assert len(outcome.fixed) == 2
    assert outcome.view.entries.shape == (3, 3)
    points = outcome.points()
    assert len(points) == 9
    for pt in points:
        for axis, coord in outcome.fixed.items():
            assert pt[axis - 1] == coord
        assert word.entries[pt] == outcome.view.entries[
            pt[outcome.free_axes[0] - 1], pt[outcome.free_axes[1] - 1]
        ]


def test_composed_completeness(cube4):
    rng = np.random.default_rng(7)
    word = cube4.encode(rng.integers(0, 2, size=16))
    tester = ComposedTester(cube4)
    for seed in range(50):
        assert tester.sample_view(word, np.random.default_rng(seed)).consistent
    assert rejection_probability_exact(word, cube4) == 0


def test_rejection_exact_single_flip(cube3):
    # exactly the three planes through the flipped point reject
    assert rejection_probability_exact(single_flip(cube3), cube3) == Fraction(1, 3)


def test_rejection_exact_matches_plane_enumeration(cube3):
    word = random_word(cube3, 11)
    inconsistent = 0
    for pl in PlaneTester(cube3).planes():
        view = np.take(word.entries, pl.coord, axis=pl.axis - 1)
        inconsistent += not is_square_member(cube3.base, view)
    assert rejection_probability_exact(word, cube3) == Fraction(inconsistent, 9)


def test_rejection_sampled_determinism(cube3):
    word = random_word(cube3, 19)
    a = rejection_probability_sampled(word, cube3, 500, seed=4)
    b = rejection_probability_sampled(word, cube3, 500, seed=4)
    assert a == b


def test_sampled_agrees_with_exact_within_three_sigma(cube3, cube4):
    for code, seed in ((cube3, 23), (cube4, 29)):
        word = random_word(code, seed)
        exact = float(rejection_probability_exact(word, code))
        sampled = rejection_probability_sampled(word, code, 4000, seed=1)
        sigma = max(np.sqrt(exact * (1 - exact) / 4000), 1 / 4000)
        assert abs(float(sampled.estimate) - exact) <= 3 * sigma


def test_strong_ltc_inequality_exact(cube3):
    bound = composed_robustness_bound(cube3)
    for seed in range(60):
        word = random_word(cube3, seed)
        delta = Fraction(cube3.distance_to(word), cube3.blocklength)
        assert rejection_probability_exact(word, cube3) >= bound * delta


def test_exact_path_count_m4(cube4):
    # stage sizes 4*3 then 3*3 in all-axes mode
    word = single_flip(cube4)
    rejection = rejection_probability_exact(word, cube4)
    assert rejection.denominator in (108, 54, 36, 27, 12, 9, 4, 3, 2, 1)  # divides 108
    assert 108 % rejection.denominator == 0


def test_view_outcome_free_axes_ascending(cube4):
    word = random_word(cube4, 31)
    tester = ComposedTester(cube4)
    for seed in range(20):
        outcome = tester.sample_view(word, np.random.default_rng(seed))
        assert outcome.free_axes[0] < outcome.free_axes[1]
