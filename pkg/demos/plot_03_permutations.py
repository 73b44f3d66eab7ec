"""
Reliability-driven permutations of a BCH code
=============================================

Primitive BCH codes are invariant under ``i -> 2^k i + l (mod N)``.
Before decoding we pick the map that moves the most reliable positions
into the first K slots, decode, and undo the permutation.
"""

# %%
import numpy as np

from lcodec.automorphism import BchPermutation, best_permutation, is_automorphism, perm_apply, perm_inverse
from lcodec.channel import AwgnChannel, bipolar
from lcodec.codes import BchParams, bch_construct, encode
from lcodec.decoder import MapOracle, decode, permuted_decode

code = bch_construct(BchParams(4, 2))
p = BchPermutation(4, k=1, l=3)
print("pi(2) =", p(2), " inverse:", perm_inverse(p))
print("automorphism:", is_automorphism(code, p))

# %%
# Reliabilities come from the channel: the conditional mutual information
# carried by each received value.
ch = AwgnChannel.from_ebn0(4.0, code.rate)
rng = np.random.default_rng(2)
y = bipolar(encode(code, rng.integers(0, 2, code.k))) * ch.sample_noise(rng, code.n)
rel = ch.adjusted_reliability(y)
best = best_permutation(code, rel)
print("reliability in first K, identity:", rel[: code.k].sum().round(3))
print(f"reliability in first K, {best}:", perm_apply(best, rel)[: code.k].sum().round(3))

# %%
# The exact MAP decoder does not care about the ordering, so permuted and
# plain decoding agree word for word.
x = bipolar(encode(code, rng.integers(0, 2, (5000, code.k))))
y = x * ch.sample_noise(rng, x.shape)
F = MapOracle(code, ch)
same = np.array_equal(decode(code, F, y).x_hat_hard, permuted_decode(code, F, ch, y).x_hat_hard)
print("permuted MAP == plain MAP:", same)
