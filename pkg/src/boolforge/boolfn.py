"""Truth tables, algebraic normal forms and bivariate representations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .gf2field import SubfieldEmbedding, embedding_for

# Möbius masks: bits j of a 64-bit word whose i-th index bit is 0
_LOW_MASKS = [
    np.uint64(0x5555555555555555),
    np.uint64(0x3333333333333333),
    np.uint64(0x0F0F0F0F0F0F0F0F),
    np.uint64(0x00FF00FF00FF00FF),
    np.uint64(0x0000FFFF0000FFFF),
    np.uint64(0x00000000FFFFFFFF),
]


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """popcount of every index in [0, 2^n)."""
    out = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int8)
    out.flags.writeable = False
    return out


def n_words(n: int) -> int:
    return max(1, (1 << n) >> 6)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack 0/1 values along the last axis into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    length = bits.shape[-1]
    pad = (-length) % 64
    if pad:
        bits = np.concatenate([bits, np.zeros(bits.shape[:-1] + (pad,), np.uint8)], axis=-1)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, length: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    bits = np.unpackbits(words.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :length]


def mobius_words(words: np.ndarray, n: int) -> np.ndarray:
    """Binary Möbius transform of packed tables along the last axis (copy)."""
    w = np.array(words, dtype=np.uint64, copy=True)
    for i in range(min(n, 6)):
        w ^= (w & _LOW_MASKS[i]) << np.uint64(1 << i)
    for i in range(6, n):
        h = 1 << (i - 6)
        view = w.reshape(w.shape[:-1] + (-1, 2, h))
        view[..., 1, :] ^= view[..., 0, :]
    return w


class TruthTable:
    """Value vector of an n-variable Boolean function; ``bits[z] = f(z)``."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits):
        bits = np.asarray(bits)
        if bits.shape != (1 << n,):
            raise ValueError(f"truth table of {n} variables needs {1 << n} entries, got {bits.shape}")
        if bits.dtype != np.uint8:
            if np.any((bits != 0) & (bits != 1)):
                raise ValueError("truth table entries must be 0 or 1")
            bits = bits.astype(np.uint8)
        bits = bits.copy()
        bits.flags.writeable = False
        self.n = n
        self.bits = bits

    @classmethod
    def zeros(cls, n: int) -> TruthTable:
        return cls(n, np.zeros(1 << n, np.uint8))

    @classmethod
    def ones(cls, n: int) -> TruthTable:
        return cls(n, np.ones(1 << n, np.uint8))

    @classmethod
    def from_support(cls, n: int, support: Iterable[int] | np.ndarray) -> TruthTable:
        bits = np.zeros(1 << n, np.uint8)
        bits[np.asarray(list(support) if not isinstance(support, np.ndarray) else support,
                        dtype=np.int64)] = 1
        return cls(n, bits)

    @classmethod
    def from_words(cls, n: int, words: np.ndarray) -> TruthTable:
        return cls(n, unpack_bits(words, 1 << n))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> TruthTable:
        return cls(n, rng.integers(0, 2, 1 << n, dtype=np.uint8))

    def words(self) -> np.ndarray:
        return pack_bits(self.bits)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def weight(self) -> int:
        return int(np.count_nonzero(self.bits))

    def is_balanced(self) -> bool:
        return 2 * self.weight() == 1 << self.n

    def is_constant(self) -> bool:
        w = self.weight()
        return w == 0 or w == 1 << self.n

    def complement(self) -> TruthTable:
        return TruthTable(self.n, self.bits ^ 1)

    def anf(self) -> AnfPolynomial:
        return mobius(self)

    def degree(self) -> int:
        return degree(self)

    def _check(self, other: TruthTable) -> None:
        if not isinstance(other, TruthTable) or other.n != self.n:
            raise ValueError("truth tables differ in size")

    def __xor__(self, other: TruthTable) -> TruthTable:
        self._check(other)
        return TruthTable(self.n, self.bits ^ other.bits)

    __add__ = __xor__

    def __and__(self, other: TruthTable) -> TruthTable:
        self._check(other)
        return TruthTable(self.n, self.bits & other.bits)

    __mul__ = __and__

    def __eq__(self, other) -> bool:
        return isinstance(other, TruthTable) and other.n == self.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"TruthTable(n={self.n}, weight={self.weight()})"


class AnfPolynomial:
    """ANF coefficients; ``coeffs[I]`` multiplies the monomial prod_{i in I} x_i."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.uint8)
        if coeffs.shape != (1 << n,):
            raise ValueError(f"ANF of {n} variables needs {1 << n} coefficients")
        coeffs = coeffs.copy()
        coeffs.flags.writeable = False
        self.n = n
        self.coeffs = coeffs

    @classmethod
    def from_monomials(cls, n: int, monomials: Iterable[int]) -> AnfPolynomial:
        c = np.zeros(1 << n, np.uint8)
        for mask in monomials:
            c[mask] ^= 1
        return cls(n, c)

    def monomials(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)

    @property
    def degree(self) -> int:
        mons = self.monomials()
        if mons.size == 0:
            return -1
        return int(popcounts(self.n)[mons].max())

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def evaluate(self) -> TruthTable:
        return inverse_mobius(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, AnfPolynomial) and other.n == self.n and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"AnfPolynomial(n={self.n}, degree={self.degree}, terms={self.monomials().size})"


def mobius(tt: TruthTable) -> AnfPolynomial:
    w = mobius_words(tt.words(), tt.n)
    return AnfPolynomial(tt.n, unpack_bits(w, 1 << tt.n))


def inverse_mobius(anf: AnfPolynomial) -> TruthTable:
    # the binary Möbius transform is an involution
    w = mobius_words(pack_bits(anf.coeffs), anf.n)
    return TruthTable(anf.n, unpack_bits(w, 1 << anf.n))


def degree(tt: TruthTable) -> int:
    """Algebraic degree; -1 for the zero function."""
    return mobius(tt).degree


def weight(tt: TruthTable) -> int:
    return tt.weight()


def is_balanced(tt: TruthTable) -> bool:
    return tt.is_balanced()


def pointwise_add(a: TruthTable, b: TruthTable) -> TruthTable:
    return a ^ b


def pointwise_mul(a: TruthTable, b: TruthTable) -> TruthTable:
    return a & b


def wt_n(n: int, i: int) -> int:
    """Binary weight of i reduced into {0, ..., 2^n - 2} modulo 2^n - 1."""
    if n < 1:
        raise ValueError("n must be positive")
    mod = (1 << n) - 1
    return bin(i % mod).count("1") if mod > 1 else 0


def exponent_weight(e: int) -> int:
    """Weight of a monomial exponent taken from [0, 2^k - 1].

    Exponents are not reduced: x^(2^k - 1) is the degree-k indicator of
    x != 0, not x^0.
    """
    if e < 0:
        raise ValueError("monomial exponents are non-negative")
    return bin(e).count("1")


class BivariateIndexer:
    """Point layout for F: GF(2^rm) x GF(2^m) -> GF(2).

    A point index z carries the coordinates of y over the subfield basis
    {beta^0, ..., beta^(m-1)} in its low m bits and the polynomial-basis
    coordinates of x (i.e. the integer x itself) in its high rm bits.
    """

    def __init__(self, embedding: SubfieldEmbedding):
        self.embedding = embedding
        self.field = embedding.parent
        self.n1 = embedding.parent.k
        self.n2 = embedding.m
        self.n = self.n1 + self.n2
        self._xs: np.ndarray | None = None
        self._ys: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"BivariateIndexer(rm={self.n1}, m={self.n2}, modulus={self.field.modulus:#x})"

    def index(self, x: int, y: int) -> int:
        self.field.check(x)
        return (x << self.n2) | self.embedding.coords_of(y)

    def index_array(self, x: np.ndarray, y_coords: np.ndarray) -> np.ndarray:
        return (np.asarray(x, np.int64) << self.n2) | np.asarray(y_coords, np.int64)

    def point(self, z: int) -> tuple[int, int]:
        return z >> self.n2, int(self.embedding.coords_to_element[z & ((1 << self.n2) - 1)])

    @property
    def x_values(self) -> np.ndarray:
        if self._xs is None:
            xs = np.arange(1 << self.n, dtype=np.int64) >> self.n2
            xs.flags.writeable = False
            self._xs = xs
        return self._xs

    @property
    def y_values(self) -> np.ndarray:
        if self._ys is None:
            low = np.arange(1 << self.n, dtype=np.int64) & ((1 << self.n2) - 1)
            ys = self.embedding.coords_to_element[low]
            ys.flags.writeable = False
            self._ys = ys
        return self._ys


@lru_cache(maxsize=None)
def indexer_for(rm: int, m: int, modulus: int | None = None) -> BivariateIndexer:
    return BivariateIndexer(embedding_for(rm, m, modulus))


@dataclass(frozen=True)
class BivariateTerm:
    """coeff * x^i * y^j, with coeff the coordinate integer of a GF(2^rm) element."""

    i: int
    j: int
    coeff: int


def bivariate_degree(terms: Sequence[BivariateTerm]) -> int:
    return max((exponent_weight(t.i) + exponent_weight(t.j) for t in terms if t.coeff), default=-1)


def _power_values(field, values: np.ndarray, e: int) -> np.ndarray:
    # 0^0 = 1
    if e == 0:
        return np.ones_like(values)
    return field.pow_array(values, e)


def evaluate_bivariate_at(terms: Sequence[BivariateTerm], indexer: BivariateIndexer,
                          points: np.ndarray) -> np.ndarray:
    """Values of sum coeff * x^i * y^j at the given point indices, checked to lie in GF(2)."""
    f = indexer.field
    points = np.asarray(points, dtype=np.int64)
    xs = indexer.x_values[points]
    ys = indexer.y_values[points]
    acc = np.zeros(points.shape, dtype=np.int64)
    xpow: dict[int, np.ndarray] = {}
    ypow: dict[int, np.ndarray] = {}
    for t in terms:
        if not t.coeff:
            continue
        if t.i not in xpow:
            xpow[t.i] = _power_values(f, xs, t.i)
        if t.j not in ypow:
            ypow[t.j] = _power_values(f, ys, t.j)
        acc ^= f.mul_array(f.mul_array(xpow[t.i], ypow[t.j]), np.full_like(xs, t.coeff))
    if np.any(acc > 1):
        bad = int(points[np.argmax(acc > 1)])
        raise ValueError(f"bivariate form evaluates outside GF(2) at point {bad}")
    return acc.astype(np.uint8)


def evaluate_bivariate(terms: Sequence[BivariateTerm], indexer: BivariateIndexer) -> TruthTable:
    points = np.arange(1 << indexer.n, dtype=np.int64)
    return TruthTable(indexer.n, evaluate_bivariate_at(terms, indexer, points))
