"""Syndrome-based soft decoding with a pluggable noise estimator.

The decoder sees only ``|y|`` and the syndrome of the hard decisions,
asks an estimator for the noise signs, and multiplies them back onto
``sign(y)``. Any object with ``estimate(a, s) -> zhat`` works as the
estimator; arrays may carry leading batch dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import automorphism as aut
from . import gf2
from .channel import BisoChannel, hard_decision, sign, to_bin
from .codes import CodeError, LinearCode, syndrome


class UnsupportedCodeError(CodeError):
    pass


@dataclass
class DecodeResult:
    x_hat_soft: np.ndarray
    x_hat_hard: np.ndarray
    x_hat_bits: np.ndarray
    m_hat: np.ndarray
    permutation: object = None


class IdentityEstimator:
    """Predicts no noise at all, so decoding reduces to ``sign(y)``."""

    def __init__(self, code: LinearCode):
        self.n = code.n

    def estimate(self, a, s):
        a = np.asarray(a, dtype=np.float64)
        return np.ones(a.shape)


class _CosetOracle:
    """Exact posterior over the syndrome coset, by enumeration.

    The coset of ``s`` is ``D s + C``. Given ``|z| = a`` the noise signs are
    independent with log-odds ``llr(a_i)`` for ``+1``, so a pattern ``e``
    has weight proportional to ``exp(-sum_i e_i llr(a_i))``.
    """

    def __init__(self, code: LinearCode, channel: BisoChannel, chunk: int = 4096):
        self.code = code
        self.channel = channel
        self.chunk = chunk
        C = code.codewords()
        self._C = C.astype(np.float64)
        self._Hf = code.H[code.independent_rows]
        self._D = code.D

    def bit_error_probs(self, a, s) -> np.ndarray:
        """P(noise bit i = 1 | a, s) for every position."""
        a = np.asarray(a, dtype=np.float64)
        s = gf2.as_bits(s)
        if a.shape[-1] != self.code.n or s.shape[-1] != self.code.H.shape[0]:
            raise ValueError("reliability/syndrome sizes do not match the code")
        lead = a.shape[:-1]
        a2 = a.reshape(-1, self.code.n)
        s2 = np.broadcast_to(s, lead + s.shape[-1:]).reshape(-1, s.shape[-1])
        s_ind = s2[:, self.code.independent_rows]
        e0 = gf2.mat_vec_mod2(self._D, s_ind)
        # Redundant rows of H must agree with the particular solution.
        if not np.array_equal(gf2.mat_vec_mod2(self.code.H, e0), s2):
            raise ValueError("syndrome is inconsistent with the parity-check matrix; coset is empty")
        L = self.channel.llr(a2)
        out = np.empty(a2.shape)
        for lo in range(0, a2.shape[0], self.chunk):
            sl = slice(lo, lo + self.chunk)
            ef = e0[sl].astype(np.float64)
            Ls = L[sl]
            # log-weight of e0 ^ c, up to a per-row constant
            logw = -((Ls * (1.0 - 2.0 * ef)) @ self._C.T)
            logw -= logw.max(axis=1, keepdims=True)
            w = np.exp(logw)
            w /= w.sum(axis=1, keepdims=True)
            pc = w @ self._C  # P(c_i = 1)
            out[sl] = np.where(e0[sl] == 1, 1.0 - pc, pc)
        return out.reshape(lead + (self.code.n,))


class MapOracle(_CosetOracle):
    """Per-bit MAP noise sign; exact ties resolve to +1."""

    def estimate(self, a, s):
        p1 = self.bit_error_probs(a, s)
        return np.where(p1 > 0.5, -1.0, 1.0)


class MmseOracle(_CosetOracle):
    """Posterior mean of each noise sign."""

    def estimate(self, a, s):
        return 1.0 - 2.0 * self.bit_error_probs(a, s)


def brute_force_map_F(code, ch, a, s):
    return MapOracle(code, ch).estimate(a, s)


def brute_force_mmse_F(code, ch, a, s):
    return MmseOracle(code, ch).estimate(a, s)


def _check_estimator(code, F):
    n = getattr(F, "n", code.n)
    k = getattr(F, "k", code.k)
    if (n, k) != (code.n, code.k):
        raise ValueError(f"estimator built for ({n},{k}) but code is ({code.n},{code.k})")


def decode(code: LinearCode, F, y, mode: str = "hard") -> DecodeResult:
    """Run the syndrome pipeline on one word or a batch of words."""
    if mode not in ("hard", "soft"):
        raise ValueError(f"mode must be 'hard' or 'soft', got {mode!r}")
    y = np.asarray(y, dtype=np.float64)
    if y.shape[-1] != code.n:
        raise CodeError(f"channel output length {y.shape[-1]} != N={code.n}")
    _check_estimator(code, F)
    a = np.abs(y)
    ys, yb = hard_decision(y)
    s = syndrome(code, yb)
    zhat = np.asarray(F.estimate(a, s), dtype=np.float64)
    if zhat.shape != y.shape:
        raise ValueError(f"estimator returned shape {zhat.shape}, expected {y.shape}")
    soft = ys * zhat
    hard = sign(soft)
    bits = to_bin(hard)
    return DecodeResult(soft, hard, bits, gf2.mat_vec_mod2(code.A, bits))


def _require_bch(code: LinearCode):
    if code.bch is None or not code.parity_layout:
        raise UnsupportedCodeError(f"permuted decoding needs a BCH code with parity-last layout, got {code.name}")


def permuted_decode(code: LinearCode, F, ch: BisoChannel, y, mode: str = "hard") -> DecodeResult:
    """Permute by the reliability-optimal automorphism, decode, permute back."""
    _require_bch(code)
    y = np.asarray(y, dtype=np.float64)
    if y.shape[-1] != code.n:
        raise CodeError(f"channel output length {y.shape[-1]} != N={code.n}")
    rel = ch.adjusted_reliability(y)
    k, l = aut.best_permutation_batch(code, rel)
    fwd = aut.permutation_indices(code.n, k, l)
    inv = aut.inverse_indices(code.n, k, l)
    yp = np.take_along_axis(y, fwd, axis=-1)
    res = decode(code, F, yp, mode)
    soft = np.take_along_axis(res.x_hat_soft, inv, axis=-1)
    hard = sign(soft)
    bits = to_bin(hard)
    if y.ndim == 1:
        perm = aut.BchPermutation(code.bch.m, int(k), int(l))
    else:
        perm = np.stack([k, l], axis=-1)
    return DecodeResult(soft, hard, bits, gf2.mat_vec_mod2(code.A, bits), perm)


class SyndromeDecoder:
    """Bundles code, estimator and options for repeated batch decoding."""

    def __init__(self, code: LinearCode, F, channel: BisoChannel | None = None, mode: str = "hard",
                 permute: bool = False, name: str | None = None):
        if permute:
            _require_bch(code)
            if channel is None:
                raise ValueError("permuted decoding needs the channel for reliabilities")
        _check_estimator(code, F)
        self.code, self.F, self.channel = code, F, channel
        self.mode, self.permute = mode, permute
        self.name = name or type(F).__name__

    def __call__(self, y) -> DecodeResult:
        if self.permute:
            return permuted_decode(self.code, self.F, self.channel, y, self.mode)
        return decode(self.code, self.F, y, self.mode)


def codeword_map_oracle(code: LinearCode, sigma: float, y) -> np.ndarray:
    """Bitwise MAP of the transmitted bipolar symbols for BPSK over AWGN.

    Enumerates every codeword and uses the Gaussian likelihood directly;
    shares nothing with the syndrome path beyond the codebook. Exact ties
    resolve to ``sign(y_i)``.
    """
    y = np.asarray(y, dtype=np.float64)
    X = 1.0 - 2.0 * code.codewords().astype(np.float64)  # (2^K, N)
    lead = y.shape[:-1]
    y2 = y.reshape(-1, code.n)
    out = np.empty(y2.shape)
    for lo in range(0, y2.shape[0], 4096):
        yy = y2[lo: lo + 4096]
        # log p(y | x) up to constants, per codeword
        ll = -((yy[:, None, :] - X[None, :, :]) ** 2).sum(axis=-1) / (2.0 * sigma**2)
        ll -= ll.max(axis=1, keepdims=True)
        w = np.exp(ll)
        w /= w.sum(axis=1, keepdims=True)
        mean = w @ X  # P(+1) - P(-1)
        out[lo: lo + 4096] = np.where(mean > 0, 1.0, np.where(mean < 0, -1.0, sign(yy)))
    return out.reshape(lead + (code.n,))
