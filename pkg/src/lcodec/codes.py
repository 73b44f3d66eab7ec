"""Binary linear codes: BCH construction, encoding, syndromes and alist I/O."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gf2

# Bit j of each entry is the coefficient of x^j.
DEFAULT_PRIMITIVE_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


class CodeError(ValueError):
    """Raised when a code cannot be constructed or an input has the wrong size."""


class AlistError(ValueError):
    """Raised on malformed alist text; the message names the offending line."""


# --------------------------------------------------------------------------
# Polynomials over GF(2), stored as Python ints.


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        shift = poly_degree(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_to_str(p: int) -> str:
    terms = []
    for d in range(poly_degree(p), -1, -1):
        if (p >> d) & 1:
            terms.append("1" if d == 0 else "x" if d == 1 else f"x^{d}")
    return " + ".join(terms) or "0"


# --------------------------------------------------------------------------
# GF(2^m) arithmetic through exp/log tables.


class GF2m:
    """The field GF(2^m) generated by a primitive polynomial."""

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 2 <= m <= 16:
            raise CodeError(f"field degree m={m} outside 2..16")
        poly = DEFAULT_PRIMITIVE_POLYS[m] if primitive_poly is None else primitive_poly
        if poly_degree(poly) != m:
            raise CodeError(f"polynomial {poly_to_str(poly)} does not have degree {m}")
        self.m = m
        self.order = (1 << m) - 1
        self.poly = poly
        exp = np.zeros(2 * self.order, dtype=np.int64)
        log = np.full(1 << m, -1, dtype=np.int64)
        x = 1
        for i in range(self.order):
            if i > 0 and x == 1:
                raise CodeError(f"{poly_to_str(poly)} is not primitive")
            exp[i] = x
            log[x] = i
            x <<= 1
            if x >> m:
                x ^= poly
        if x != 1:
            raise CodeError(f"{poly_to_str(poly)} is not primitive")
        exp[self.order:] = exp[: self.order]
        self.exp = exp
        self.log = log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def minimal_polynomial(self, i: int) -> int:
        """Minimal polynomial over GF(2) of alpha^i, as a bitmask."""
        coset = cyclotomic_coset(i, self.order)
        # Coefficients live in GF(2^m) during the product; lowest degree first.
        coeffs = [1]
        for j in coset:
            root = int(self.exp[j])
            nxt = [0] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                nxt[d + 1] ^= c
                nxt[d] ^= self.mul(c, root)
            coeffs = nxt
        out = 0
        for d, c in enumerate(coeffs):
            if c not in (0, 1):
                raise AssertionError("minimal polynomial has non-binary coefficient")
            out |= c << d
        return out


def cyclotomic_coset(i: int, n: int) -> list[int]:
    coset = []
    j = i % n
    while j not in coset:
        coset.append(j)
        j = (2 * j) % n
    return coset


@dataclass(frozen=True)
class BchParams:
    m: int
    t: int
    primitive_poly: int | None = None

    @property
    def n(self) -> int:
        return (1 << self.m) - 1


def bch_generator_poly(params: BchParams) -> int:
    """lcm of the minimal polynomials of alpha, alpha^3, ..., alpha^(2t-1)."""
    if params.t < 1:
        raise CodeError("designed radius t must be at least 1")
    field_ = GF2m(params.m, params.primitive_poly)
    seen: set[int] = set()
    g = 1
    for i in range(1, 2 * params.t, 2):
        rep = min(cyclotomic_coset(i, field_.order))
        if rep in seen:
            continue
        seen.add(rep)
        g = poly_mul(g, field_.minimal_polynomial(rep))
    return g


# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A binary linear code with its generator, parity-check and recovery matrices.

    ``G`` is N x K (codewords are ``G @ m``), ``H`` has N columns and rank
    N - K, and ``A`` is K x N with ``A @ G = I``.
    """

    G: np.ndarray
    H: np.ndarray
    A: np.ndarray
    name: str = "code"
    bch: BchParams | None = None
    generator_poly: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for arr in (self.G, self.H, self.A):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return self.G.shape[0]

    @property
    def k(self) -> int:
        return self.G.shape[1]

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def parity_layout(self) -> bool:
        """True when the last N-K columns of H form an identity block."""
        r = self.n - self.k
        if self.H.shape[0] != r:
            return False
        return bool(np.array_equal(self.H[:, self.k:], gf2.identity(r)))

    @cached_property
    def D(self) -> np.ndarray:
        """Right inverse of the full-rank part of H (particular coset solutions)."""
        Hf = gf2.remove_redundant_rows(self.H)
        D = gf2.right_inverse(Hf)
        D.setflags(write=False)
        return D

    @cached_property
    def independent_rows(self) -> np.ndarray:
        return np.array(_independent_row_indices(self.H), dtype=np.int64)

    def codewords(self) -> np.ndarray:
        """All 2^K codewords, row ``j`` encoding the bits of integer ``j``."""
        if self.k > 22:
            raise CodeError(f"refusing to enumerate 2^{self.k} codewords")
        if "codewords" not in self._cache:
            msgs = message_table(self.k)
            cw = encode(self, msgs)
            cw.setflags(write=False)
            self._cache["codewords"] = cw
        return self._cache["codewords"]

    def with_redundant_rows(self, count: int, seed: int = 0) -> "LinearCode":
        """Copy of this code with ``count`` random sums of H rows appended."""
        rng = np.random.default_rng(seed)
        extra = []
        while len(extra) < count:
            mix = rng.integers(0, 2, size=self.H.shape[0], dtype=np.uint8)
            if mix.any():
                extra.append(gf2.mat_vec_mod2(self.H.T, mix))
        H = np.vstack([self.H] + extra) if extra else self.H.copy()
        return LinearCode(
            G=self.G.copy(),
            H=H,
            A=self.A.copy(),
            name=f"{self.name}+{count}r",
            bch=self.bch,
            generator_poly=self.generator_poly,
        )


def _independent_row_indices(H) -> list[int]:
    kept = gf2.remove_redundant_rows(H)
    out, j = [], 0
    for i, row in enumerate(gf2.as_bits(H)):
        if j < len(kept) and np.array_equal(row, kept[j]):
            out.append(i)
            j += 1
    return out


def message_table(k: int) -> np.ndarray:
    """Binary expansion of 0..2^k-1, bit ``i`` of integer ``j`` at column ``i``."""
    j = np.arange(1 << k, dtype=np.int64)
    return ((j[:, None] >> np.arange(k)) & 1).astype(np.uint8)


def bch_construct(params: BchParams, redundant_rows: int = 0) -> LinearCode:
    """Systematic narrow-sense binary BCH code with message first, parity last.

    Position ``i`` holds the coefficient of ``x^i``. For a message ``m`` the
    parity part ``p`` solves ``m(x) + x^K p(x) = 0 mod g(x)``.
    """
    g = bch_generator_poly(params)
    n = params.n
    r = poly_degree(g)
    k = n - r
    if k <= 0:
        raise CodeError(f"BCH(m={params.m}, t={params.t}) has dimension {k}")
    P = np.zeros((r, k), dtype=np.uint8)
    for j in range(k):
        # x^j = x^K * x^(N-K+j) mod (x^N - 1)
        _, rem = poly_divmod(1 << (n - k + j), g)
        P[:, j] = [(rem >> d) & 1 for d in range(r)]
    G = np.vstack([gf2.identity(k), P])
    H = np.hstack([P, gf2.identity(r)])
    A = np.hstack([gf2.identity(k), np.zeros((k, r), dtype=np.uint8)])
    code = LinearCode(G=G, H=H, A=A, name=f"bch-{n}-{k}", bch=params, generator_poly=g)
    if redundant_rows:
        code = code.with_redundant_rows(redundant_rows)
    return code


def hamming_7_4() -> LinearCode:
    """Systematic Hamming(7,4) with parity rows 110, 101, 011, 111."""
    P = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], dtype=np.uint8)
    G = np.vstack([gf2.identity(4), P.T])
    H = np.hstack([P.T, gf2.identity(3)])
    A = np.hstack([gf2.identity(4), np.zeros((4, 3), dtype=np.uint8)])
    return LinearCode(G=G, H=H, A=A, name="hamming-7-4")


def repetition_code(n: int) -> LinearCode:
    """Length-n repetition code with a path-shaped (cycle-free) Tanner graph."""
    H = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        H[i, i] = H[i, i + 1] = 1
    return code_from_parity_check(H, name=f"rep-{n}")


def single_parity_code(n: int) -> LinearCode:
    return code_from_parity_check(np.ones((1, n), dtype=np.uint8), name=f"spc-{n}")


def code_from_parity_check(H, name: str = "code") -> LinearCode:
    H = gf2.as_bits(H)
    G = gf2.null_space(H)
    if G.shape[1] == 0:
        raise CodeError("parity-check matrix admits only the zero codeword")
    return LinearCode(G=G, H=H.copy(), A=gf2.left_inverse(G), name=name)


def code_from_generator(G, name: str = "code") -> LinearCode:
    G = gf2.as_bits(G)
    if gf2.rank_mod2(G) != G.shape[1]:
        raise CodeError("generator matrix must have full column rank")
    H = gf2.null_space(G.T).T
    return LinearCode(G=G.copy(), H=H, A=gf2.left_inverse(G), name=name)


BUILTIN_CODES = {
    "hamming-7-4": hamming_7_4,
    "bch-7-4": lambda: bch_construct(BchParams(3, 1)),
    "bch-15-11": lambda: bch_construct(BchParams(4, 1)),
    "bch-15-7": lambda: bch_construct(BchParams(4, 2)),
    "bch-15-5": lambda: bch_construct(BchParams(4, 3)),
    "bch-31-21": lambda: bch_construct(BchParams(5, 2)),
    "bch-63-45": lambda: bch_construct(BchParams(6, 3)),
    "bch-127-64": lambda: bch_construct(BchParams(7, 10)),
    "rep-3": lambda: repetition_code(3),
    "spc-3": lambda: single_parity_code(3),
}


def get_code(name: str) -> LinearCode:
    try:
        return BUILTIN_CODES[name]()
    except KeyError:
        raise CodeError(f"unknown code {name!r}; builtins: {', '.join(BUILTIN_CODES)}") from None


def encode(code: LinearCode, m) -> np.ndarray:
    """Codeword bits ``G @ m``; accepts a single message or a batch."""
    m = gf2.as_bits(m)
    if m.shape[-1] != code.k:
        raise CodeError(f"message length {m.shape[-1]} != K={code.k}")
    return gf2.mat_vec_mod2(code.G, m)


def syndrome(code: LinearCode, yb) -> np.ndarray:
    yb = gf2.as_bits(yb)
    if yb.shape[-1] != code.n:
        raise CodeError(f"word length {yb.shape[-1]} != N={code.n}")
    return gf2.mat_vec_mod2(code.H, yb)


# --------------------------------------------------------------------------
# alist: "cols rows", "max_col_deg max_row_deg", column degrees, row degrees,
# then one 1-based row list per column and one column list per row.


def load_alist(text) -> np.ndarray:
    if not isinstance(text, str):
        text = text.read()
    lines = [(i + 1, ln.split()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, toks) for no, toks in lines if toks]
    pos = 0

    def take(expected: int | None = None):
        nonlocal pos
        if pos >= len(lines):
            raise AlistError(f"line {lines[-1][0] + 1 if lines else 1}: unexpected end of input")
        no, toks = lines[pos]
        pos += 1
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise AlistError(f"line {no}: non-integer token") from None
        if expected is not None and len(vals) != expected:
            raise AlistError(f"line {no}: expected {expected} values, got {len(vals)}")
        return no, vals

    no, (cols, rows) = take(2)
    if cols < 1 or rows < 1:
        raise AlistError(f"line {no}: dimensions must be positive")
    no, (max_cdeg, max_rdeg) = take(2)
    no_cdeg, col_deg = take(cols)
    no_rdeg, row_deg = take(rows)
    if max(col_deg) > max_cdeg or max(row_deg) > max_rdeg:
        raise AlistError(f"line {no}: degree exceeds declared maximum")

    H = np.zeros((rows, cols), dtype=np.uint8)
    for c in range(cols):
        no, idx = take()
        if len(idx) != col_deg[c]:
            raise AlistError(f"line {no}: column {c + 1} lists {len(idx)} entries, degree is {col_deg[c]}")
        for r in idx:
            if not 1 <= r <= rows:
                raise AlistError(f"line {no}: row index {r} out of range 1..{rows}")
            if H[r - 1, c]:
                raise AlistError(f"line {no}: duplicate row index {r}")
            H[r - 1, c] = 1
    for r in range(rows):
        no, idx = take()
        if len(idx) != row_deg[r]:
            raise AlistError(f"line {no}: row {r + 1} lists {len(idx)} entries, degree is {row_deg[r]}")
        for c in idx:
            if not 1 <= c <= cols:
                raise AlistError(f"line {no}: column index {c} out of range 1..{cols}")
        if sorted(idx) != list(np.flatnonzero(H[r]) + 1):
            raise AlistError(f"line {no}: row {r + 1} disagrees with the column lists")
    if pos != len(lines):
        raise AlistError(f"line {lines[pos][0]}: trailing content")
    return H


def emit_alist(M) -> str:
    M = gf2.as_bits(M)
    rows, cols = M.shape
    col_lists = [np.flatnonzero(M[:, c]) + 1 for c in range(cols)]
    row_lists = [np.flatnonzero(M[r]) + 1 for r in range(rows)]
    out = io.StringIO()
    out.write(f"{cols} {rows}\n")
    out.write(f"{max((len(x) for x in col_lists), default=0)} {max((len(x) for x in row_lists), default=0)}\n")
    out.write(" ".join(str(len(x)) for x in col_lists) + "\n")
    out.write(" ".join(str(len(x)) for x in row_lists) + "\n")
    for lst in col_lists + row_lists:
        out.write(" ".join(str(int(v)) for v in lst) + "\n")
    return out.getvalue()


def code_from_alist(h_text=None, g_text=None, name: str = "alist") -> LinearCode:
    """Build a code from an H alist, a G alist (N x K), or both."""
    if h_text is None and g_text is None:
        raise CodeError("need an H or G alist")
    if g_text is None:
        return code_from_parity_check(load_alist(h_text), name=name)
    G = load_alist(g_text)
    if h_text is None:
        return code_from_generator(G, name=name)
    H = load_alist(h_text)
    if H.shape[1] != G.shape[0] or gf2.mat_mul_mod2(H, G).any():
        raise CodeError("H and G alists are not orthogonal")
    if gf2.rank_mod2(H) != G.shape[0] - G.shape[1]:
        raise CodeError("rank(H) != N - K")
    return LinearCode(G=G, H=H, A=gf2.left_inverse(G), name=name)
