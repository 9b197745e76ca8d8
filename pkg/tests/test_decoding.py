from fractions import Fraction

import numpy as np
import pytest

from tensorltc.decoding import DecoderConfig, decode_square, inconsistent_entries
from tensorltc.errors import ShapeError
from tensorltc.linear_code import parity_code, repetition_code
from tensorltc.noise import codeword_plus_errors, random_codeword
from tensorltc.tensor_code import TensorCode, TensorWord


@pytest.fixture(scope="module")
def rep50():
    return repetition_code(50)


@pytest.fixture(scope="module")
def rep50_square(rep50):
    return TensorCode(rep50, 2)


def test_config_defaults(rep50, hamming):
    cfg = DecoderConfig.for_code(rep50)
    assert cfg.radius == 24
    assert cfg.alpha == Fraction(12, 25)
    assert cfg.removal_threshold == Fraction(24, 100)
    cfg = DecoderConfig.for_code(hamming)
    assert cfg.radius == 1
    assert cfg.alpha == Fraction(1, 7)


def test_error_budget_examples(rep50, hamming):
    assert DecoderConfig.for_code(rep50).error_budget() == 5
    assert DecoderConfig.for_code(hamming).error_budget() == 0
    degenerate = DecoderConfig.for_code(parity_code(3))  # d = 2 gives radius 0
    assert degenerate.alpha == 0
    assert degenerate.error_budget() == 0


def test_budget_constant_is_configurable(rep50):
    cfg = DecoderConfig.for_code(rep50, budget_constant=50)
    assert cfg.error_budget() == 24 * 24 // 50


def test_inconsistent_entries():
    a = np.zeros((3, 3), dtype=int)
    b = np.zeros((3, 3), dtype=int)
    assert not inconsistent_entries(a, b).any()
    b[1, 2] = 1
    marks = inconsistent_entries(a, b)
    assert marks.sum() == 1 and marks[1, 2] == 1
    marks = inconsistent_entries(a, a, row_failed=np.array([True, False, False]))
    assert marks[0].all() and marks[1:].sum() == 0
    with pytest.raises(ShapeError):
        inconsistent_entries(a, np.zeros((2, 3), dtype=int))


def test_codeword_passes_through(rep50_square, hamming, parity3):
    # every configuration with a zero budget must at least fix its codewords
    for base in (rep50_square.base, hamming, parity3):
        cfg = DecoderConfig.for_code(base)
        word = random_codeword(TensorCode(base, 2), 1)
        out, trace = decode_square(word, cfg)
        assert out == word
        assert trace.removed_rows == () and trace.removed_cols == ()
        assert trace.status == "ok" and trace.result_distance == 0


def test_hamming_single_flips_in_one_row(hamming):
    square = TensorCode(hamming, 2)
    cfg = DecoderConfig.for_code(hamming)
    clean = random_codeword(square, 7)
    for j in range(7):
        noisy = clean.entries.copy()
        noisy[3, j] ^= 1
        out, trace = decode_square(TensorWord(square.field, noisy), cfg)
        assert out == clean, f"flip at column {j}: {trace.status}"


def test_rep50_recovers_budget_errors(rep50_square):
    cfg = DecoderConfig.for_code(rep50_square.base)
    budget = cfg.error_budget()
    for seed in range(25):
        clean, noisy = codeword_plus_errors(rep50_square, budget, seed)
        out, trace = decode_square(noisy, cfg)
        assert out == clean
        # counting invariant: lines at the diagnostic threshold stay rare
        assert 100 * trace.bad_rows <= cfg.radius
        assert 100 * trace.bad_cols <= cfg.radius


def test_concentrated_row_corruption_triggers_removal(rep50_square):
    cfg = DecoderConfig.for_code(rep50_square.base)
    clean = random_codeword(rep50_square, 3)
    noisy = clean.entries.copy()
    flip = (noisy[20, :30] + 1) % 2
    noisy[20, :30] = flip  # 30 > radius errors in one row
    out, trace = decode_square(TensorWord(rep50_square.field, noisy), cfg)
    assert out == clean
    assert trace.removed_rows == (20,)
    assert trace.removed_cols == ()


def test_beyond_budget_never_returns_non_codeword(rep50_square):
    cfg = DecoderConfig.for_code(rep50_square.base)
    flat = rep50_square.flattened()
    rng = np.random.default_rng(0)
    for _ in range(5):
        garbage = TensorWord(rep50_square.field, rng.integers(0, 2, size=(50, 50)))
        out, _ = decode_square(garbage, cfg)
        assert out is None or flat.is_codeword(out.flat())


def test_failure_is_clean_on_unremovable_junk(parity3):
    # radius 0: any non-codeword line fails its decode and gets removed
    square = TensorCode(parity3, 2)
    cfg = DecoderConfig.for_code(parity3)
    junk = np.zeros((3, 3), dtype=int)
    junk[0, 0] = 1
    out, trace = decode_square(TensorWord(square.field, junk), cfg)
    assert out is None
    assert trace.status != "ok"


def test_decode_trace_serializes(rep50_square):
    cfg = DecoderConfig.for_code(rep50_square.base)
    _, trace = decode_square(random_codeword(rep50_square, 2), cfg)
    doc = trace.to_json_dict()
    assert doc["status"] == "ok"
    assert doc["budget"] == 5
    assert len(doc["inconsistent"]) == 50


def test_shape_validation(rep50):
    cfg = DecoderConfig.for_code(rep50)
    with pytest.raises(ShapeError):
        decode_square(np.zeros((3, 3), dtype=int), cfg)


def test_custom_radius_and_threshold(hamming):
    cfg = DecoderConfig.for_code(hamming, radius=0, removal_threshold=Fraction(1, 2))
    assert cfg.radius == 0
    square = TensorCode(hamming, 2)
    word = random_codeword(square, 4)
    out, _ = decode_square(word, cfg)
    assert out == word
    with pytest.raises(ValueError):
        DecoderConfig.for_code(hamming, removal_threshold=Fraction(3, 2))
    with pytest.raises(ValueError):
        DecoderConfig.for_code(hamming, radius=-1)
