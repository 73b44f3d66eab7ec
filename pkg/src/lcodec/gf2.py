"""Dense GF(2) linear algebra on numpy ``uint8`` arrays.

Bit vectors and bit matrices are plain arrays holding 0/1 entries; every
function here copies its input and never mutates it.
"""

from __future__ import annotations

import numpy as np


class GF2Error(ValueError):
    """Raised for dimension mismatches and singular systems over GF(2)."""


def as_bits(a) -> np.ndarray:
    """Return ``a`` as a ``uint8`` array reduced mod 2."""
    arr = np.asarray(a)
    if arr.dtype == np.uint8:
        return arr & 1
    return (arr.astype(np.int64) % 2).astype(np.uint8)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def mat_vec_mod2(M, v) -> np.ndarray:
    """Multiply ``M`` by ``v`` over GF(2).

    ``v`` may be a single vector of length ``M.shape[1]`` or a batch with
    shape ``(..., M.shape[1])``; the result has shape ``(..., M.shape[0])``.
    """
    M = as_bits(M)
    v = as_bits(v)
    if M.ndim != 2 or v.shape[-1] != M.shape[1]:
        raise GF2Error(f"cannot multiply {M.shape} matrix by vector of shape {v.shape}")
    # int32 accumulation keeps the dot product exact before reducing.
    return ((v.astype(np.int32) @ M.T.astype(np.int32)) & 1).astype(np.uint8)


def mat_mul_mod2(A, B) -> np.ndarray:
    A = as_bits(A)
    B = as_bits(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise GF2Error(f"cannot multiply {A.shape} by {B.shape}")
    return ((A.astype(np.int32) @ B.astype(np.int32)) & 1).astype(np.uint8)


def row_reduce(M, columns=None):
    """Gauss-Jordan elimination over GF(2).

    Args:
        M: binary matrix.
        columns: order in which columns are scanned for pivots. Defaults to
            natural order ``0..cols-1``.

    Returns:
        ``(R, pivots, T)`` where ``R`` is the reduced matrix, ``pivots`` the
        pivot columns in the order found (pivot ``j`` lives in row ``j``) and
        ``T`` the invertible row transform with ``T @ M == R``.
    """
    R = as_bits(M).copy()
    rows, cols = R.shape
    T = identity(rows)
    if columns is None:
        columns = range(cols)
    pivots: list[int] = []
    r = 0
    for c in columns:
        if r == rows:
            break
        hits = np.flatnonzero(R[r:, c])
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
            T[[r, p]] = T[[p, r]]
        others = np.flatnonzero(R[:, c])
        others = others[others != r]
        if others.size:
            R[others] ^= R[r]
            T[others] ^= T[r]
        pivots.append(int(c))
        r += 1
    return R, pivots, T


def rank_mod2(M) -> int:
    M = as_bits(M)
    if M.size == 0:
        return 0
    return len(row_reduce(M)[1])


def right_inverse(H) -> np.ndarray:
    """Return ``D`` with ``H @ D == I`` over GF(2).

    Pivots are searched from the last column backwards, so a parity-check
    matrix of the form ``[P | I]`` yields ``D = [0; I]``.
    """
    H = as_bits(H)
    rows, cols = H.shape
    _, pivots, T = row_reduce(H, columns=range(cols - 1, -1, -1))
    if len(pivots) < rows:
        raise GF2Error(f"matrix has rank {len(pivots)} < {rows} rows; no right inverse")
    D = np.zeros((cols, rows), dtype=np.uint8)
    D[pivots, :] = T
    return D


def left_inverse(G) -> np.ndarray:
    """Return ``A`` with ``A @ G == I`` over GF(2).

    Rows of ``G`` are eliminated in natural order, so a systematic
    ``G = [I; P]`` yields ``A = [I | 0]``.
    """
    G = as_bits(G)
    n, k = G.shape
    _, pivots, T = row_reduce(G.T)
    if len(pivots) < k:
        raise GF2Error(f"matrix has rank {len(pivots)} < {k} columns; no left inverse")
    A = np.zeros((k, n), dtype=np.uint8)
    A[:, pivots] = T.T
    return A


def remove_redundant_rows(H) -> np.ndarray:
    """Keep the earliest linearly independent rows of ``H``, in order."""
    H = as_bits(H)
    keep: list[int] = []
    basis = np.zeros((0, H.shape[1]), dtype=np.uint8)
    pivots: list[int] = []
    for i, row in enumerate(H):
        v = row.copy()
        # Reduce against the echelon basis built so far.
        for b, p in zip(basis, pivots):
            if v[p]:
                v ^= b
        nz = np.flatnonzero(v)
        if nz.size == 0:
            continue
        keep.append(i)
        p = int(nz[0])
        # Keep the basis fully reduced on its pivot columns.
        hit = [j for j, b in enumerate(basis) if b[p]]
        if hit:
            basis[hit] ^= v
        basis = np.vstack([basis, v])
        pivots.append(p)
    return H[keep].copy()


def null_space(M) -> np.ndarray:
    """Basis of ``{x : M x = 0}`` as the columns of the returned matrix."""
    M = as_bits(M)
    cols = M.shape[1]
    R, pivots, _ = row_reduce(M)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = np.zeros((cols, len(free)), dtype=np.uint8)
    for j, f in enumerate(free):
        N[f, j] = 1
        for r, p in enumerate(pivots):
            N[p, j] = R[r, f]
    return N
