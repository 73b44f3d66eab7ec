"""
Building codes and their GF(2) inverses
=======================================

A binary BCH code is built from a primitive polynomial, then checked
for the three matrices the syndrome decoder relies on: ``H`` (parity
checks), ``A`` (message recovery) and ``D`` (a particular coset
representative for every syndrome).
"""

# %%
import numpy as np

from lcodec import gf2
from lcodec.codes import BchParams, bch_construct, encode, hamming_7_4, poly_to_str, syndrome

code = bch_construct(BchParams(m=4, t=2))
print(f"{code.name}: N={code.n}, K={code.k}, rate {code.rate:.3f}")
print("g(x) =", poly_to_str(code.generator_poly))

# %%
# Stacking ``H`` on top of ``A`` gives a square, invertible matrix: the
# syndrome and the message together pin down the received hard decisions.
B = np.vstack([code.H, code.A])
print("rank(B) =", gf2.rank_mod2(B), "of", code.n)
print("A G = I:", np.array_equal(gf2.mat_mul_mod2(code.A, code.G), gf2.identity(code.k)))
print("H D = I:", np.array_equal(gf2.mat_mul_mod2(code.H, code.D), gf2.identity(code.n - code.k)))

# %%
# Encoding and syndromes. Flipping a bit of a codeword produces the
# syndrome of the flip alone.
rng = np.random.default_rng(0)
m = rng.integers(0, 2, code.k)
x = encode(code, m)
e = np.zeros(code.n, dtype=np.uint8)
e[3] = 1
print("message      ", m)
print("codeword     ", x)
print("syndrome(x)  ", syndrome(code, x))
print("syndrome(x^e)", syndrome(code, x ^ e), "= column 3 of H:", code.H[:, 3])

# %%
# The same holds for the small Hamming code, whose ``D`` is ``[0; I]``
# because its parity checks end in an identity block.
ham = hamming_7_4()
print(ham.D.T)
