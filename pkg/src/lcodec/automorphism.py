"""Affine index permutations i -> 2^k i + l (mod N) of primitive BCH codes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import LinearCode


@dataclass(frozen=True)
class BchPermutation:
    m: int
    k: int = 0
    l: int = 0

    def __post_init__(self):
        if not 0 <= self.k < self.m or not 0 <= self.l < self.n:
            raise ValueError(f"need 0 <= k < {self.m} and 0 <= l < {self.n}, got k={self.k}, l={self.l}")

    @property
    def n(self) -> int:
        return (1 << self.m) - 1

    @property
    def is_identity(self) -> bool:
        return self.k == 0 and self.l == 0

    def indices(self) -> np.ndarray:
        """The map as an index array: ``indices()[i] == pi(i)``."""
        i = np.arange(self.n, dtype=np.int64)
        return ((i << self.k) + self.l) % self.n

    def __call__(self, i: int) -> int:
        return ((i << self.k) + self.l) % self.n


def perm_apply(p: BchPermutation, v) -> np.ndarray:
    """``out[..., i] = v[..., pi(i)]``."""
    v = np.asarray(v)
    if v.shape[-1] != p.n:
        raise ValueError(f"vector length {v.shape[-1]} != N={p.n}")
    return v[..., p.indices()]


def perm_inverse(p: BchPermutation) -> BchPermutation:
    s = (p.m - p.k) % p.m
    t = (-(1 << s) * p.l) % p.n
    return BchPermutation(p.m, s, t)


def all_permutations(m: int):
    n = (1 << m) - 1
    for k in range(m):
        for l in range(n):
            yield BchPermutation(m, k, l)


def is_automorphism(code: LinearCode, p) -> bool:
    """True iff every permuted basis codeword satisfies the parity checks.

    ``p`` may be a :class:`BchPermutation` or any index array.
    """
    idx = p.indices() if isinstance(p, BchPermutation) else np.asarray(p)
    if idx.shape != (code.n,):
        raise ValueError(f"permutation length {idx.shape} != N={code.n}")
    permuted = code.G[idx, :]
    return not gf2.mat_mul_mod2(code.H, permuted).any()


def _field_degree(code: LinearCode) -> int:
    m = code.n.bit_length()
    if (1 << m) - 1 != code.n:
        raise ValueError(f"block length {code.n} is not of the form 2^m - 1")
    return m


def window_scores(code: LinearCode, rel) -> np.ndarray:
    """Objective of every pi_{k,l}: array ``S[k, l] = sum_{i<K} rel[pi_{k,l}(i)]``.

    For fixed k the objective is a cyclic window of length K over
    ``w_j = rel[2^k j]``, starting at ``l' = 2^(m-k) l``; all N windows come
    from one prefix sum.
    """
    rel = np.asarray(rel, dtype=np.float64)
    n, k_dim = code.n, code.k
    if rel.shape[-1] != n:
        raise ValueError(f"reliability length {rel.shape[-1]} != N={n}")
    m = _field_degree(code)
    j = np.arange(n, dtype=np.int64)
    scores = np.empty(rel.shape[:-1] + (m, n))
    for k in range(m):
        w = rel[..., (j << k) % n]
        ext = np.concatenate([w, w[..., : k_dim - 1]], axis=-1) if k_dim > 1 else w
        csum = np.concatenate([np.zeros(w.shape[:-1] + (1,)), np.cumsum(ext, axis=-1)], axis=-1)
        win = csum[..., k_dim: k_dim + n] - csum[..., :n]  # indexed by l'
        l_of = ((j << k) % n)  # l = 2^k l'
        scores[..., k, l_of] = win
    return scores


def best_permutation(code: LinearCode, rel) -> BchPermutation:
    """pi_{k,l} maximising the reliability mass on the first K positions.

    Ties go to the smallest k, then the smallest l.
    """
    rel = np.asarray(rel, dtype=np.float64)
    if rel.ndim != 1:
        raise ValueError("best_permutation takes a single reliability vector")
    k, l = best_permutation_batch(code, rel)
    return BchPermutation(_field_degree(code), int(k), int(l))


def best_permutation_batch(code: LinearCode, rel) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`best_permutation`; returns arrays ``(k, l)``."""
    rel = np.asarray(rel, dtype=np.float64)
    scores = window_scores(code, rel)
    flat = scores.reshape(scores.shape[:-2] + (-1,))
    # Prefix-sum differences carry rounding error; scores this close to the
    # maximum count as ties so that the first (k, l) in row-major order wins.
    tol = 4 * code.n * np.finfo(np.float64).eps * np.abs(rel).sum(axis=-1)
    near = flat >= flat.max(axis=-1)[..., None] - tol[..., None]
    return np.divmod(near.argmax(axis=-1), code.n)


def permutation_indices(n: int, k, l) -> np.ndarray:
    """Index arrays of pi_{k,l} for arrays of parameters; shape ``(..., n)``."""
    i = np.arange(n, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)[..., None]
    l = np.asarray(l, dtype=np.int64)[..., None]
    return ((i << k) + l) % n


def inverse_indices(n: int, k, l) -> np.ndarray:
    m = n.bit_length()
    k = np.asarray(k, dtype=np.int64)
    l = np.asarray(l, dtype=np.int64)
    s = (m - k) % m
    t = (-(np.left_shift(1, s)) * l) % n
    return permutation_indices(n, s, t)
