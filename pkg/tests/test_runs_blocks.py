import math
from dataclasses import replace

import numpy as np
import pytest

from lyndonrf.factorize import standard_right_factor, standard_right_factor_naive
from lyndonrf.runs_blocks import (BlockParams, classify_good, decompose_blocks, permute_blocks,
                                  run_profile, second_smallest_distance)
from lyndonrf.sampling import make_rng, sample_lyndon
from lyndonrf.words import Word, is_lyndon


@pytest.fixture
def small():
    """Thresholds sized for the 12-letter hand example."""
    base = BlockParams.for_length(12, 2)
    return replace(base, min_run=3, min_block_len=4, max_run=4, min_separation=6,
                   h_lo=1, h_hi=3)


@pytest.mark.parametrize("s, N, X, M, Ma", [
    ("aabbbbaaa", 3, (2, 4, 3), 4, 3),
    ("aaaaabbbb", 2, (5, 4), 5, 5),
    ("bbbb", 1, (4,), 4, 0),
    ("a", 1, (1,), 1, 1),
])
def test_run_profile(W, s, N, X, M, Ma):
    p = run_profile(W(s))
    assert (p.num_runs, tuple(p.lengths.tolist()), p.max_run, p.max_run_a1) == (N, X, M, Ma)


def test_run_profile_adjacent_letters_differ():
    rng = make_rng(3)
    for _ in range(50):
        p = run_profile(Word(rng.integers(0, 3, 40), 3))
        assert np.all(p.letters[1:] != p.letters[:-1])
        assert p.lengths.sum() == 40


def test_params_default_thresholds():
    p = BlockParams.for_length(2 ** 10, 2)
    assert (p.min_run, p.min_block_len, p.max_run, p.min_separation) == (8, 30, 20, 80)
    assert p.h_lo == pytest.approx(2 ** 2 / 4)
    assert p.h_hi == pytest.approx(9 * 2 ** 2 / 4)


@pytest.mark.parametrize("eps", [0, 1, -0.1])
def test_params_reject_bad_epsilon(eps):
    with pytest.raises(ValueError):
        BlockParams.for_length(100, 2, eps)


def test_decomposition_hand_example(W, small):
    dec = decompose_blocks(W("aaababaaabbb"), small)
    assert [(b.kind, str(b.word)) for b in dec.blocks] == [
        ("long", "aaab"), ("short", "ab"), ("long", "aaabbb")]
    assert (dec.H, dec.K, dec.j0, dec.d_n, dec.flags) == (2, 3, 2, 0.5, ())
    # the second smallest block starts where the right factor does
    assert standard_right_factor_naive(W("aaababaaabbb")).r_len == 6


def test_decomposition_without_qualifying_run(W, small):
    dec = decompose_blocks(W("aaababaaabbb"), replace(small, min_run=4))
    assert dec.H == 0
    assert "no_long_start" in dec.flags
    assert dec.j0 is None and dec.d_n is None


def test_decomposition_flags_leading_letter(W, small):
    dec = decompose_blocks(W("baaab"), small)
    assert "leading_non_a1" in dec.flags
    assert b"".join(dec.block_bytes(i) for i in range(dec.K)) == W("baaab").tobytes()


def test_truncated_long_block_is_flagged(W, small):
    dec = decompose_blocks(W("aaababaaab"), replace(small, min_block_len=5))
    assert "truncated_long_block" in dec.flags
    assert [str(b.word) for b in dec.blocks] == ["aaabab", "aaab"]


@pytest.mark.parametrize("q", [2, 3])
def test_partition_and_boundaries(q):
    rng = make_rng(11, q)
    params = BlockParams.for_length(500, q)
    for _ in range(40):
        w = sample_lyndon(500, q, rng)
        dec = decompose_blocks(w, params)
        assert dec.lengths.sum() == 500
        assert b"".join(dec.block_bytes(i) for i in range(dec.K)) == w.tobytes()
        a = w.letters
        # every block ends right before a run of the smallest letter
        assert np.all(a[dec.ends[:-1]] == 0)
        assert np.all(a[dec.ends[:-1] - 1] != 0)
        assert np.all(dec.lead_run[dec.is_long] >= params.min_run)


def test_good_hand_example(W, small):
    rep = classify_good(W("aaababaaabbb"), small)
    assert rep.is_good and rep.failed_conditions == ()
    assert second_smallest_distance(W("aaababaaabbb"), small) == 0.5


def test_long_a_run_fails_high_bound():
    n = 64
    w = Word([0] * 20 + [1] * (n - 20), 2)
    rep = classify_good(w, BlockParams.for_length(n, 2))
    assert "max_run_a_high" in rep.failed_conditions
    assert not rep.is_good


def test_classify_rejects_non_lyndon(W, small):
    with pytest.raises(ValueError):
        classify_good(W("ba"), small)


def test_permutation_examples(W, small):
    w = W("aaababaaabbb")
    assert permute_blocks(w, [1, 2], small) == w
    out = permute_blocks(w, [2, 1], small)
    assert str(out) == "aaabaaabbbab"
    assert is_lyndon(out)


@pytest.mark.parametrize("sigma", [[1], [1, 1], [0, 2], [1, 2, 3]])
def test_permutation_rejects_bad_sigma(W, small, sigma):
    with pytest.raises(ValueError):
        permute_blocks(W("aaababaaabbb"), sigma, small)


def test_permutation_rejects_bad_word(W, small):
    with pytest.raises(ValueError):
        permute_blocks(W("aaababaaabbb"), [1, 2], replace(small, min_run=4))


def _good_words(n, q, eps, count, seed):
    rng = make_rng(seed)
    params = BlockParams.for_length(n, q, eps)
    found = []
    while len(found) < count:
        w = sample_lyndon(n, q, rng)
        if classify_good(w, params).is_good:
            found.append(w)
    return params, found


@pytest.mark.parametrize("q", [2, 3])
def test_permutation_keeps_lyndon_and_blocks(q):
    params, words = _good_words(2000, q, 0.25, 20, seed=5)
    rng = make_rng(6)
    for w in words:
        dec = decompose_blocks(w, params)
        for _ in range(10):
            sigma = (rng.permutation(dec.K - 1) + 1).tolist()
            out = permute_blocks(w, sigma, params)
            assert is_lyndon(out)
            # adjacent long blocks may start closer than the separation bound
            assert set(classify_good(out, params).failed_conditions) <= {"separation"}
            assert decompose_blocks(out, params).multiset() == dec.multiset()


def test_block_lengths_bounded_on_good_words():
    params, words = _good_words(2000, 2, 0.2, 30, seed=8)
    for w in words:
        assert decompose_blocks(w, params).lengths.max() <= 7 * math.log2(2000)


def test_right_factor_dichotomy():
    n = 10 ** 4
    params, words = _good_words(n, 2, 0.2, 60, seed=9)
    for w in words:
        dec = decompose_blocks(w, params)
        R = standard_right_factor(w).r_len
        atom = R == n - 1
        at_j0 = dec.j0 is not None and R == n - dec.starts[dec.j0]
        assert atom != at_j0
        if at_j0:
            assert dec.d_n == dec.starts[dec.j0] / n
