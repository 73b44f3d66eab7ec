"""Executable property checks behind ``lcodec oracle-check``."""

from __future__ import annotations

import numpy as np

from . import automorphism as aut
from . import gf2
from .channel import AwgnChannel, bipolar, hard_decision
from .codes import LinearCode, encode, syndrome
from .decoder import IdentityEstimator, MapOracle, codeword_map_oracle, decode
from .neural import VanillaNet


def map_equivalence(code: LinearCode, ebn0_db: float, trials: int, seed: int = 0) -> bool:
    """Syndrome decoding with the MAP oracle matches codeword-domain bitwise MAP."""
    ch = AwgnChannel.from_ebn0(ebn0_db, code.rate)
    rng = np.random.default_rng(seed)
    F = MapOracle(code, ch)
    for lo in range(0, trials, 20_000):
        size = min(20_000, trials - lo)
        x = bipolar(encode(code, rng.integers(0, 2, (size, code.k))))
        y = x * ch.sample_noise(rng, x.shape)
        if not np.array_equal(decode(code, F, y).x_hat_hard, codeword_map_oracle(code, ch.sigma, y)):
            return False
    return True


def codeword_invariance(code: LinearCode, ebn0_db: float, trials: int, words: int = 10, seed: int = 0) -> bool:
    """Error patterns depend on the noise only, for several estimators."""
    ch = AwgnChannel.from_ebn0(ebn0_db, code.rate)
    rng = np.random.default_rng(seed)
    estimators = [IdentityEstimator(code), VanillaNet(code.n, code.k, n_layers=3, rng=seed)]
    if code.k <= 16:
        estimators.append(MapOracle(code, ch))
    z = ch.sample_noise(rng, (trials, code.n))
    xs = bipolar(encode(code, rng.integers(0, 2, (words, code.k))))
    for F in estimators:
        ref = None
        for x in xs:
            err = decode(code, F, x * z).x_hat_hard != x
            if ref is None:
                ref = err
            elif not np.array_equal(err, ref):
                return False
    return True


def syndrome_transparency(code: LinearCode, trials: int, seed: int = 0) -> bool:
    ch = AwgnChannel(1.0)
    rng = np.random.default_rng(seed)
    z = ch.sample_noise(rng, (trials, code.n))
    x = bipolar(encode(code, rng.integers(0, 2, (trials, code.k))))
    return np.array_equal(syndrome(code, hard_decision(x * z)[1]), syndrome(code, hard_decision(z)[1]))


def rank_conditions(code: LinearCode) -> bool:
    B = np.vstack([code.H, code.A])
    k = code.k
    r = code.n - k
    D = code.D
    return (
        gf2.rank_mod2(B) == code.n
        and np.array_equal(gf2.mat_mul_mod2(code.A, code.G), gf2.identity(k))
        and np.array_equal(gf2.mat_mul_mod2(code.H[code.independent_rows], D), gf2.identity(r))
        and not gf2.mat_mul_mod2(code.H, code.G).any()
    )


def automorphisms(code: LinearCode) -> bool:
    m = code.bch.m
    for p in aut.all_permutations(m):
        if not aut.is_automorphism(code, p):
            return False
        q = aut.perm_inverse(p)
        v = np.arange(code.n)
        if not np.array_equal(aut.perm_apply(p, aut.perm_apply(q, v)), v):
            return False
    return True


def brute_force_best(code: LinearCode, rel) -> tuple[int, int]:
    """Argmax over every (k, l) by direct summation; first maximum wins."""
    m = code.bch.m
    best, arg = -np.inf, None
    for p in aut.all_permutations(m):
        val = rel[p.indices()[: code.k]].sum()
        if val > best:
            best, arg = val, (p.k, p.l)
    return arg


def permutation_search(code: LinearCode, trials: int, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        rel = rng.random(code.n)
        p = aut.best_permutation(code, rel)
        if (p.k, p.l) != brute_force_best(code, rel):
            return False
    return True


def run_all(code: LinearCode, trials: int, ebn0_db: float = 4.0, seed: int = 0) -> list[tuple[str, bool]]:
    results = [("rank conditions", rank_conditions(code)),
               ("syndrome transparency", syndrome_transparency(code, min(trials, 10_000), seed))]
    if code.k <= 16:
        results.append(("MAP equivalence", map_equivalence(code, ebn0_db, trials, seed)))
    results.append(("codeword invariance", codeword_invariance(code, ebn0_db, min(trials, 1000), seed=seed)))
    if code.bch is not None:
        results.append(("automorphisms", automorphisms(code)))
        results.append(("permutation search", permutation_search(code, min(trials, 1000), seed)))
    return results
