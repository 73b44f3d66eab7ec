import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lcodec import gf2
from lcodec.gf2 import GF2Error

from .conftest import HAMMING_H, random_full_rank


def test_mat_vec_identity_and_zero():
    assert gf2.mat_vec_mod2(gf2.identity(3), [1, 0, 1]).tolist() == [1, 0, 1]
    assert gf2.mat_vec_mod2(np.zeros((2, 3), np.uint8), [1, 1, 1]).tolist() == [0, 0]


def test_mat_vec_hamming_column():
    e0 = np.eye(7, dtype=np.uint8)[0]
    assert gf2.mat_vec_mod2(HAMMING_H, e0).tolist() == [1, 1, 0]


def test_mat_vec_batch_and_dims():
    rng = np.random.default_rng(0)
    V = rng.integers(0, 2, (5, 7))
    out = gf2.mat_vec_mod2(HAMMING_H, V)
    for v, o in zip(V, out):
        assert o.tolist() == [int(x) % 2 for x in HAMMING_H.astype(int) @ v]
    with pytest.raises(GF2Error):
        gf2.mat_vec_mod2(HAMMING_H, [1, 0, 1])


def test_rank_examples(hamming):
    assert gf2.rank_mod2(gf2.identity(5)) == 5
    assert gf2.rank_mod2([[1, 0, 1, 1], [1, 0, 1, 1]]) == 1
    assert gf2.rank_mod2(np.zeros((3, 4))) == 0
    assert gf2.rank_mod2(np.vstack([hamming.H, hamming.A])) == 7


@settings(max_examples=50, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 8), st.integers(1, 8)), elements=st.integers(0, 1)),
       st.randoms(use_true_random=False))
def test_rank_invariant_under_row_ops(M, rnd):
    r = gf2.rank_mod2(M)
    assert r <= min(M.shape)
    perm = list(range(M.shape[0]))
    rnd.shuffle(perm)
    assert gf2.rank_mod2(M[perm]) == r
    if M.shape[0] > 1:
        i, j = rnd.sample(range(M.shape[0]), 2)
        M2 = M.copy()
        M2[i] ^= M2[j]
        assert gf2.rank_mod2(M2) == r


def test_left_inverse_examples():
    assert np.array_equal(gf2.left_inverse(gf2.identity(4)), gf2.identity(4))
    P = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], dtype=np.uint8)
    G = np.vstack([gf2.identity(4), P.T])
    assert np.array_equal(gf2.left_inverse(G), np.hstack([gf2.identity(4), np.zeros((4, 3), np.uint8)]))


@pytest.mark.parametrize("n,k", [(7, 4), (15, 7), (12, 5)])
def test_left_inverse_random(n, k):
    rng = np.random.default_rng(n * 100 + k)
    for _ in range(100):
        G = random_full_rank(rng, n, k)
        A = gf2.left_inverse(G)
        assert A.shape == (k, n)
        assert np.array_equal(gf2.mat_mul_mod2(A, G), gf2.identity(k))


def test_left_inverse_rank_deficient():
    with pytest.raises(GF2Error):
        gf2.left_inverse(np.array([[1, 1], [1, 1], [0, 0]]))


def test_right_inverse_examples():
    D = gf2.right_inverse(HAMMING_H)
    assert np.array_equal(D, np.vstack([np.zeros((4, 3), np.uint8), gf2.identity(3)]))
    assert np.array_equal(gf2.right_inverse(gf2.identity(6)), gf2.identity(6))


@pytest.mark.parametrize("r,n", [(3, 7), (8, 15), (5, 9)])
def test_right_inverse_random(r, n):
    rng = np.random.default_rng(r * 100 + n)
    for _ in range(100):
        H = random_full_rank(rng, r, n)
        D = gf2.right_inverse(H)
        assert D.shape == (n, r)
        assert np.array_equal(gf2.mat_mul_mod2(H, D), gf2.identity(r))


def test_right_inverse_rank_deficient():
    with pytest.raises(GF2Error):
        gf2.right_inverse(np.array([[1, 0, 1], [1, 0, 1]]))


def test_remove_redundant_rows():
    assert np.array_equal(gf2.remove_redundant_rows(HAMMING_H), HAMMING_H)
    dup = np.vstack([HAMMING_H[:2], HAMMING_H[1], HAMMING_H[2]])
    assert np.array_equal(gf2.remove_redundant_rows(dup), HAMMING_H)
    extra = np.vstack([HAMMING_H, HAMMING_H[0] ^ HAMMING_H[1]])
    out = gf2.remove_redundant_rows(extra)
    assert np.array_equal(out, HAMMING_H)
    assert gf2.rank_mod2(out) == gf2.rank_mod2(extra)


def test_remove_redundant_rows_keeps_earliest():
    rng = np.random.default_rng(3)
    for _ in range(50):
        M = rng.integers(0, 2, (8, 6), dtype=np.uint8)
        out = gf2.remove_redundant_rows(M)
        assert out.shape[0] == gf2.rank_mod2(M)
        # greedy reference: a row is kept iff it raises the rank of the rows before it
        expected = [i for i in range(8) if gf2.rank_mod2(M[: i + 1]) > gf2.rank_mod2(M[:i])]
        assert np.array_equal(out, M[expected])


def test_null_space():
    N = gf2.null_space(HAMMING_H)
    assert N.shape == (7, 4)
    assert not gf2.mat_mul_mod2(HAMMING_H, N).any()
    assert gf2.rank_mod2(N) == 4
