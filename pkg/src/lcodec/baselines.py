"""Classical soft decoders used as references: sum-product BP and OSD."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from . import gf2
from .codes import LinearCode

LLR_CLAMP = 30.0
_TANH_CLAMP = math.tanh(LLR_CLAMP / 2.0)


class TannerGraph:
    """Edge lists of a parity-check matrix, with checks padded to equal degree.

    ``check_vars[c, j]`` is the j-th variable of check ``c`` (or ``n`` for
    padding); ``check_edges[c, j]`` the matching edge index (or ``E``).
    """

    def __init__(self, H):
        H = gf2.as_bits(H)
        self.m, self.n = H.shape
        cs, vs = np.nonzero(H)
        self.edge_check = cs
        self.edge_var = vs
        self.num_edges = cs.size
        deg = np.bincount(cs, minlength=self.m)
        dmax = int(deg.max()) if self.m else 0
        self.check_vars = np.full((self.m, dmax), self.n, dtype=np.int64)
        self.check_edges = np.full((self.m, dmax), self.num_edges, dtype=np.int64)
        slot = np.zeros(self.m, dtype=np.int64)
        for e, (c, v) in enumerate(zip(cs, vs)):
            self.check_vars[c, slot[c]] = v
            self.check_edges[c, slot[c]] = e
            slot[c] += 1
        self.H = H


def _leave_one_out_prod(t):
    """Product over the last axis excluding each position, without division."""
    ones = np.ones(t.shape[:-1] + (1,))
    pre = np.cumprod(np.concatenate([ones, t[..., :-1]], axis=-1), axis=-1)
    suf = np.cumprod(np.concatenate([ones, t[..., :0:-1]], axis=-1), axis=-1)[..., ::-1]
    return pre * suf


def bp_decode(H, llr, max_iters: int = 5, early_stop: bool = True):
    """Flooding sum-product decoding.

    Args:
        H: parity-check matrix (or a prebuilt :class:`TannerGraph`).
        llr: channel LLRs, positive favouring bit 0; shape ``(..., N)``.
        max_iters: number of flooding iterations; 0 returns the channel LLRs.
        early_stop: freeze a word once its hard decisions satisfy every check.

    Returns:
        ``(posterior, bits, converged)``.
    """
    g = H if isinstance(H, TannerGraph) else TannerGraph(H)
    llr = np.asarray(llr, dtype=np.float64)
    lead = llr.shape[:-1]
    L = llr.reshape(-1, g.n)
    B = L.shape[0]
    post = L.copy()
    bits = (post < 0).astype(np.uint8)
    converged = ~gf2.mat_vec_mod2(g.H, bits).any(axis=-1)
    if max_iters <= 0 or g.num_edges == 0:
        return post.reshape(llr.shape), bits.reshape(llr.shape), converged.reshape(lead)
    c2v = np.zeros((B, g.num_edges))
    active = np.ones(B, dtype=bool)
    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Lb, c2vb = L[idx], c2v[idx]
        tot = Lb.copy()
        np.add.at(tot, (slice(None), g.edge_var), c2vb)
        v2c = tot[:, g.edge_var] - c2vb
        t = np.tanh(v2c / 2.0)
        # Padding edges carry tanh = 1 so they do not change the product.
        t = np.concatenate([t, np.ones((idx.size, 1))], axis=1)[:, g.check_edges]
        prod = np.clip(_leave_one_out_prod(t), -_TANH_CLAMP, _TANH_CLAMP)
        new = 2.0 * np.arctanh(prod)
        c2vb = np.empty_like(c2vb)
        mask = g.check_edges < g.num_edges
        c2vb[:, g.check_edges[mask]] = new[:, mask]
        c2v[idx] = c2vb
        pb = Lb.copy()
        np.add.at(pb, (slice(None), g.edge_var), c2vb)
        post[idx] = pb
        bb = (pb < 0).astype(np.uint8)
        bits[idx] = bb
        ok = ~gf2.mat_vec_mod2(g.H, bb).any(axis=-1)
        converged[idx] = ok
        if early_stop:
            active[idx[ok]] = False
    return post.reshape(llr.shape), bits.reshape(llr.shape), converged.reshape(lead)


# --------------------------------------------------------------------------


def _error_patterns(k: int, order: int) -> np.ndarray:
    pats = [np.zeros(k, dtype=np.uint8)]
    for w in range(1, order + 1):
        for combo in combinations(range(k), w):
            p = np.zeros(k, dtype=np.uint8)
            p[list(combo)] = 1
            pats.append(p)
    return np.array(pats)


class OsdDecoder:
    """Order-l ordered-statistics decoding with correlation discrimination."""

    def __init__(self, code: LinearCode, order: int = 2):
        if not 0 <= order <= code.k:
            raise ValueError(f"OSD order must lie in 0..{code.k}, got {order}")
        self.code = code
        self.order = order
        self.patterns = _error_patterns(code.k, order)
        self._Gt = code.G.T.copy()  # K x N, rows span the code

    def decode_llr(self, llr) -> np.ndarray:
        llr = np.asarray(llr, dtype=np.float64)
        lead = llr.shape[:-1]
        L = llr.reshape(-1, self.code.n)
        out = np.empty(L.shape)
        for b, row in enumerate(L):
            out[b] = self._decode_one(row)
        return out.reshape(lead + (self.code.n,))

    def _decode_one(self, L):
        order = np.argsort(-np.abs(L), kind="stable")
        R, pivots, _ = gf2.row_reduce(self._Gt, columns=order)
        # R rows form a basis with identity on the pivot (most reliable basis) columns.
        u = (L[pivots] < 0).astype(np.uint8)
        msgs = self.patterns ^ u
        cands = gf2.mat_vec_mod2(R.T, msgs)
        corr = (1.0 - 2.0 * cands) @ L
        best = int(np.argmax(corr))  # first in enumeration order on ties
        return 1.0 - 2.0 * cands[best]


def osd_decode(code: LinearCode, y, ch, order: int = 2) -> np.ndarray:
    """OSD on channel output ``y``; returns bipolar codeword estimates."""
    return OsdDecoder(code, order).decode_llr(ch.llr(y))


def ml_decode(code: LinearCode, llr) -> np.ndarray:
    """Exhaustive maximum-correlation codeword (bipolar)."""
    X = 1.0 - 2.0 * code.codewords().astype(np.float64)
    llr = np.asarray(llr, dtype=np.float64)
    return X[np.argmax(llr @ X.T, axis=-1)]
