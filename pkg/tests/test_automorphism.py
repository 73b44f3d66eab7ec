import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcodec.automorphism import (
    BchPermutation,
    all_permutations,
    best_permutation,
    best_permutation_batch,
    inverse_indices,
    is_automorphism,
    perm_apply,
    perm_inverse,
    permutation_indices,
    window_scores,
)
from lcodec.codes import BchParams, bch_construct

BCH15_7 = bch_construct(BchParams(4, 2))


def brute_scores(code, rel):
    m = code.n.bit_length()
    out = np.empty((m, code.n))
    for p in all_permutations(m):
        out[p.k, p.l] = sum(rel[p(i)] for i in range(code.k))
    return out


def test_map_example():
    p = BchPermutation(4, 1, 3)
    assert p(2) == 7
    assert p.indices()[2] == 7
    assert BchPermutation(4).is_identity


def test_inverse_example():
    q = perm_inverse(BchPermutation(4, 1, 3))
    assert (q.k, q.l) == (3, 6)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        BchPermutation(4, 4, 0)
    with pytest.raises(ValueError):
        BchPermutation(4, 0, 15)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_every_map_is_a_bijection_with_inverse(m):
    for p in all_permutations(m):
        idx = p.indices()
        assert sorted(idx.tolist()) == list(range(p.n))
        inv = perm_inverse(p).indices()
        assert np.array_equal(idx[inv], np.arange(p.n))
        assert np.array_equal(inv[idx], np.arange(p.n))


def test_perm_apply_round_trip():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(4, 15))
    for p in all_permutations(4):
        w = perm_apply(p, v)
        assert np.array_equal(w[:, 2], v[:, p(2)])
        assert np.array_equal(perm_apply(perm_inverse(p), w), v)


@pytest.mark.parametrize("fixture", ["bch15_7", "bch15_11", "bch63_45"])
def test_all_maps_are_automorphisms(fixture, request):
    code = request.getfixturevalue(fixture)
    m = code.n.bit_length()
    assert all(is_automorphism(code, p) for p in all_permutations(m))


def test_codeword_set_is_preserved(bch15_7):
    words = {c.tobytes() for c in bch15_7.codewords()}
    for p in all_permutations(4):
        permuted = perm_apply(p, bch15_7.codewords())
        assert {c.tobytes() for c in permuted} == words


def test_transposition_is_not_an_automorphism(bch15_7):
    idx = np.arange(15)
    idx[[0, 1]] = idx[[1, 0]]
    assert not is_automorphism(bch15_7, idx)


def test_window_scores_match_brute_force(bch15_7):
    rng = np.random.default_rng(1)
    for _ in range(20):
        rel = rng.random(15)
        np.testing.assert_allclose(window_scores(bch15_7, rel), brute_scores(bch15_7, rel), atol=1e-12)


def first_best(code, rel):
    m = code.n.bit_length()
    scores = brute_scores(code, rel)
    best = scores.max()
    for k, l in itertools.product(range(m), range(code.n)):
        if scores[k, l] >= best - 1e-12:
            return k, l


@pytest.mark.parametrize("fixture", ["bch15_7", "bch15_11"])
def test_best_permutation_matches_exhaustive(fixture, request):
    code = request.getfixturevalue(fixture)
    rng = np.random.default_rng(2)
    rels = rng.random((1000, code.n))
    ks, ls = best_permutation_batch(code, rels)
    for rel, k, l in zip(rels, ks, ls):
        assert (int(k), int(l)) == first_best(code, rel)


def test_best_permutation_single_and_batch_agree(bch63_45):
    rng = np.random.default_rng(3)
    rels = rng.random((50, 63))
    ks, ls = best_permutation_batch(bch63_45, rels)
    for rel, k, l in zip(rels, ks, ls):
        p = best_permutation(bch63_45, rel)
        assert (p.k, p.l) == (k, l)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=15, max_size=15))
def test_best_objective_dominates_identity(rel):
    rel = np.array(rel)
    p = best_permutation(BCH15_7, rel)
    assert rel[p.indices()[:7]].sum() >= rel[:7].sum() - 1e-12


def test_constant_reliability_gives_identity(bch15_7, bch63_45):
    assert best_permutation(bch15_7, np.full(15, 0.3)).is_identity
    assert best_permutation(bch63_45, np.ones(63)).is_identity


def test_index_helpers(bch15_7):
    k = np.array([0, 1, 3])
    l = np.array([0, 3, 14])
    fwd = permutation_indices(15, k, l)
    inv = inverse_indices(15, k, l)
    for row, (kk, ll) in enumerate(zip(k, l)):
        assert np.array_equal(fwd[row], BchPermutation(4, int(kk), int(ll)).indices())
        assert np.array_equal(fwd[row][inv[row]], np.arange(15))
