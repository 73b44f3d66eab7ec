"""Binary-input symmetric-output channels in the multiplicative noise form.

A channel output is ``y = x * z`` with ``x`` bipolar and ``z`` drawn from
the law of ``Y | X = +1``. Bits map to symbols as 0 -> +1, 1 -> -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG2 = math.log(2.0)


def bipolar(b) -> np.ndarray:
    """0 -> +1, 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(b, dtype=np.float64)


def to_bin(s) -> np.ndarray:
    """+1 -> 0, -1 -> 1."""
    return (np.asarray(s) < 0).astype(np.uint8)


def sign(y) -> np.ndarray:
    """Elementwise sign with sign(0) = +1."""
    return np.where(np.asarray(y) < 0, -1.0, 1.0)


def hard_decision(y):
    """Return ``(signs, bits)`` for a real vector, with sign(0) = +1."""
    s = sign(y)
    return s, to_bin(s)


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    """Noise std per dimension for unit-energy BPSK at the given Eb/N0."""
    if not rate > 0 or rate > 1:
        raise ValueError(f"code rate must lie in (0, 1], got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def binary_entropy(q) -> np.ndarray:
    """h2(q) in bits, with h2(0) = h2(1) = 0."""
    q = np.asarray(q, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(q * np.log2(q) + (1.0 - q) * np.log2(1.0 - q))
    return np.where((q <= 0.0) | (q >= 1.0), 0.0, h)


def _h2_from_llr(L) -> np.ndarray:
    """h2(1 / (1 + e^L)) for L >= 0, stable for large L."""
    L = np.asarray(L, dtype=np.float64)
    # q = 1/(1+e^L); h2 = log2(1+e^-L) + q*L/ln2
    q = np.exp(-np.logaddexp(0.0, L))
    return (np.logaddexp(0.0, -L) + q * L) / LOG2


class BisoChannel:
    """Interface shared by the channel models."""

    def density(self, y, x):
        raise NotImplementedError

    def sample_noise(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError

    def llr(self, y) -> np.ndarray:
        raise NotImplementedError

    def adjusted_reliability(self, y) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class AwgnChannel(BisoChannel):
    """BPSK over real AWGN with per-dimension noise std ``sigma``."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @classmethod
    def from_ebn0(cls, ebn0_db: float, rate: float) -> "AwgnChannel":
        return cls(ebn0_to_sigma(ebn0_db, rate))

    @property
    def kind(self) -> str:
        return "awgn"

    def density(self, y, x):
        y = np.asarray(y, dtype=np.float64)
        return np.exp(-((y - x) ** 2) / (2 * self.sigma**2)) / (math.sqrt(2 * math.pi) * self.sigma)

    def sample_noise(self, rng, shape) -> np.ndarray:
        return 1.0 + self.sigma * rng.standard_normal(shape)

    def llr(self, y) -> np.ndarray:
        return 2.0 * np.asarray(y, dtype=np.float64) / self.sigma**2

    def adjusted_reliability(self, y) -> np.ndarray:
        return 1.0 - _h2_from_llr(np.abs(self.llr(y)))


@dataclass(frozen=True)
class BscChannel(BisoChannel):
    """Binary symmetric channel observed in the bipolar domain."""

    p: float

    def __post_init__(self):
        if not 0 < self.p < 0.5:
            raise ValueError(f"crossover probability must lie in (0, 1/2), got {self.p}")

    @property
    def kind(self) -> str:
        return "bsc"

    def density(self, y, x):
        y = np.asarray(y, dtype=np.float64)
        return np.where(y == x, 1.0 - self.p, np.where(y == -x, self.p, 0.0))

    def sample_noise(self, rng, shape) -> np.ndarray:
        return np.where(rng.random(shape) < self.p, -1.0, 1.0)

    def llr(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        return np.sign(y) * math.log((1.0 - self.p) / self.p)

    def adjusted_reliability(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        return np.full(y.shape, 1.0 - float(binary_entropy(self.p)))


def make_channel(kind: str, **params) -> BisoChannel:
    if kind == "awgn":
        return AwgnChannel(**params)
    if kind == "bsc":
        return BscChannel(**params)
    raise ValueError(f"unknown channel kind {kind!r}")


def transmit(x, z) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape:
        raise ValueError(f"symbol shape {x.shape} != noise shape {z.shape}")
    return x * z


def sample_noise(ch: BisoChannel, rng: np.random.Generator, n) -> np.ndarray:
    """Multiplicative noise with the law of ``Y | X = +1``."""
    return ch.sample_noise(rng, n)


def llr(ch: BisoChannel, y) -> np.ndarray:
    return ch.llr(y)


def adjusted_reliability(ch: BisoChannel, y) -> np.ndarray:
    """I(X; Y | |Y| = |y|) in bits for a uniform bipolar input."""
    return ch.adjusted_reliability(y)
