"""Binary finite fields GF(2^k) backed by log/antilog tables.

Elements are integers whose bits are coordinates over the polynomial basis
{1, a, ..., a^(k-1)}, where ``a`` is the class of the indeterminate modulo a
primitive polynomial.  A subfield GF(2^m) of GF(2^rm) lives inside the parent
field; there is no separate small-field arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

MAX_DEGREE = 24

# Degrees whose default modulus is not the smallest primitive polynomial.
# x^12+x^7+x^6+x^5+x^3+x+1 is the first degree-12 primitive polynomial, in
# ascending mask order, giving the reference nonlinearities for r=3, m=4 and
# for the 12-variable Carlet-Feng function.  It is also the Conway polynomial,
# as are the smallest primitive ones for k = 9 and k = 16.
PINNED_MODULI = {12: 0x10EB}


class FieldMismatchError(ValueError):
    pass


def prime_factors(v: int) -> list[int]:
    out = []
    p = 2
    while p * p <= v:
        if v % p == 0:
            out.append(p)
            while v % p == 0:
                v //= p
        p += 1
    if v > 1:
        out.append(v)
    return out


def _polymulmod(a: int, b: int, modulus: int, k: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> k) & 1:
            a ^= modulus
    return r


def _x_pow(e: int, modulus: int, k: int) -> int:
    r, a = 1, 2 if k > 1 else 1
    while e:
        if e & 1:
            r = _polymulmod(r, a, modulus, k)
        a = _polymulmod(a, a, modulus, k)
        e >>= 1
    return r


def is_primitive(modulus: int, k: int) -> bool:
    """True iff ``modulus`` has degree k and x has order exactly 2^k - 1.

    A reducible modulus has fewer than 2^k - 1 units, so the order test
    alone implies irreducibility.
    """
    if modulus >> k != 1 or not modulus & 1:
        return False
    order = (1 << k) - 1
    if _x_pow(order, modulus, k) != 1:
        return False
    return all(_x_pow(order // p, modulus, k) != 1 for p in prime_factors(order))


def primitive_polynomials(k: int) -> Iterator[int]:
    """Primitive polynomials of degree k in ascending coefficient-mask order."""
    for modulus in range((1 << k) | 1, 1 << (k + 1), 2):
        if is_primitive(modulus, k):
            yield modulus


@lru_cache(maxsize=None)
def smallest_primitive(k: int) -> int:
    return next(primitive_polynomials(k))


def default_modulus(k: int) -> int:
    return PINNED_MODULI.get(k) or smallest_primitive(k)


def _parity(v: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(v) & 1).astype(np.uint8)


class FieldSpec:
    """GF(2^k) with the generator ``alpha = x`` of a primitive modulus.

    ``antilog_table[i] = alpha^i`` for 0 <= i < 2^k - 1 and
    ``log_table[v]`` is its inverse; ``log_table[0]`` holds the sentinel -1.
    """

    def __init__(self, k: int, modulus: int | None = None):
        if not 1 <= k <= MAX_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_DEGREE}], got {k}")
        if modulus is None:
            modulus = default_modulus(k)
        if not is_primitive(modulus, k):
            raise ValueError(f"modulus {modulus:#x} is not a primitive polynomial of degree {k}")
        self.k = k
        self.modulus = modulus
        self.size = 1 << k
        self.order = self.size - 1

        antilog = np.empty(self.order, dtype=np.int64)
        v = 1
        for i in range(self.order):
            antilog[i] = v
            v <<= 1
            if v >> k:
                v ^= modulus
        log = np.full(self.size, -1, dtype=np.int64)
        log[antilog] = np.arange(self.order, dtype=np.int64)
        antilog.flags.writeable = False
        log.flags.writeable = False
        self.antilog_table = antilog
        self.log_table = log
        self.generator = 2 % self.size if k > 1 else 1

        # trace is GF(2)-linear: Tr(v) = parity(v & trace_mask)
        mask = 0
        for i in range(k):
            if self.trace_int(int(antilog[i % self.order])):
                mask |= 1 << i
        self.trace_mask = mask

    def __repr__(self) -> str:
        return f"FieldSpec(k={self.k}, modulus={self.modulus:#x})"

    # scalar arithmetic on coordinate integers

    def check(self, v: int) -> int:
        if not 0 <= v < self.size:
            raise ValueError(f"{v} does not fit in {self.k} bits")
        return v

    def mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        e = (self.log_table[a] + self.log_table[b]) % self.order
        return int(self.antilog_table[e])

    def pow_int(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero base with negative exponent")
            return 1 if e == 0 else 0
        return int(self.antilog_table[(int(self.log_table[a]) * e) % self.order])

    def inv_int(self, a: int) -> int:
        return self.pow_int(a, -1)

    def exp_int(self, i: int) -> int:
        """alpha^i for any integer i."""
        return int(self.antilog_table[i % self.order])

    def dlog_int(self, a: int) -> int:
        if a == 0:
            raise ValueError("discrete log of zero")
        return int(self.log_table[a])

    def trace_int(self, a: int) -> int:
        """Absolute trace as the Frobenius sum a + a^2 + ... + a^(2^(k-1))."""
        s, x = 0, a
        for _ in range(self.k):
            s ^= x
            x = self.mul_int(x, x)
        if s not in (0, 1):
            raise ArithmeticError(f"trace landed outside GF(2): {s}")
        return s

    # vectorised helpers

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        e = (self.log_table[a] + self.log_table[b]) % self.order
        return np.where((a == 0) | (b == 0), 0, self.antilog_table[e])

    def pow_array(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError("zero base with negative exponent")
        out = self.antilog_table[(self.log_table[a] * e) % self.order]
        return np.where(a == 0, 1 if e == 0 else 0, out)

    def trace_array(self, a: np.ndarray) -> np.ndarray:
        return _parity(np.asarray(a, dtype=np.int64) & self.trace_mask)

    def delta_exponents(self, s: int) -> np.ndarray:
        """Exponents s, ..., s + 2^(k-1) - 1 reduced mod 2^k - 1."""
        if not 0 <= s <= self.order - 1:
            raise ValueError(f"s must be in [0, {self.order - 1}], got {s}")
        return np.arange(s, s + (self.size >> 1), dtype=np.int64) % self.order

    def delta_array(self, s: int) -> np.ndarray:
        return self.antilog_table[self.delta_exponents(s)]

    def element(self, v: int) -> FieldElement:
        return FieldElement(self.check(v), self)

    def alpha_pow(self, i: int) -> FieldElement:
        return FieldElement(self.exp_int(i), self)

    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    def one(self) -> FieldElement:
        return FieldElement(1, self)


@lru_cache(maxsize=None)
def field_for(k: int, modulus: int | None = None) -> FieldSpec:
    """Shared FieldSpec instance for (k, modulus); None means the default modulus."""
    if modulus is None:
        modulus = default_modulus(k)
    return _field_cached(k, modulus)


@lru_cache(maxsize=None)
def _field_cached(k: int, modulus: int) -> FieldSpec:
    return FieldSpec(k, modulus)


@dataclass(frozen=True)
class FieldElement:
    coords: int
    field: FieldSpec

    def _same(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise FieldMismatchError("operands belong to different fields")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.coords ^ other.coords, self.field)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field.mul_int(self.coords, other.coords), self.field)

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.field.pow_int(self.coords, e), self.field)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return self * other ** -1

    def __bool__(self) -> bool:
        return self.coords != 0

    def __int__(self) -> int:
        return self.coords

    def __repr__(self) -> str:
        return f"FieldElement({self.coords:#x}, k={self.field.k})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def power(a: FieldElement, e: int) -> FieldElement:
    return a ** e


def trace(a: FieldElement) -> int:
    return a.field.trace_int(a.coords)


def dlog(a: FieldElement) -> int:
    return a.field.dlog_int(a.coords)


def delta_interval(spec: FieldSpec, s: int) -> frozenset[FieldElement]:
    """The 2^(k-1) consecutive powers alpha^s, ..., alpha^(s + 2^(k-1) - 1)."""
    return frozenset(FieldElement(int(v), spec) for v in spec.delta_array(s))


class SubfieldEmbedding:
    """GF(2^m) inside GF(2^k), generated by beta = alpha^((2^k - 1)/(2^m - 1))."""

    def __init__(self, parent: FieldSpec, m: int):
        if m < 1 or parent.k % m:
            raise ValueError(f"subfield degree {m} does not divide {parent.k}")
        self.parent = parent
        self.m = m
        self.q = 1 << m
        self.index_ratio = parent.order // (self.q - 1)
        self.beta = parent.exp_int(self.index_ratio)
        self.subfield_basis = tuple(parent.exp_int(self.index_ratio * j) for j in range(m))

        # coords_to_element[c] = sum of basis[j] over the set bits j of c
        elems = np.zeros(self.q, dtype=np.int64)
        for j, b in enumerate(self.subfield_basis):
            half = 1 << j
            elems[half:2 * half] = elems[:half] ^ b
        if len(np.unique(elems)) != self.q:
            raise ArithmeticError("subfield basis is not linearly independent")
        elems.flags.writeable = False
        self.coords_to_element = elems
        self._element_to_coords = {int(v): c for c, v in enumerate(elems)}

    def __repr__(self) -> str:
        return f"SubfieldEmbedding(k={self.parent.k}, m={self.m})"

    def contains(self, a: int) -> bool:
        return a in self._element_to_coords

    def coords_of(self, a: int) -> int:
        try:
            return self._element_to_coords[a]
        except KeyError:
            raise ValueError(f"{a:#x} is not in the subfield GF(2^{self.m})") from None

    def trace_int(self, a: int) -> int:
        """tr_1^m(a) = a + a^2 + ... + a^(2^(m-1)) computed in the parent field."""
        if not self.contains(a):
            raise ValueError(f"{a:#x} is not in the subfield GF(2^{self.m})")
        f = self.parent
        s, x = 0, a
        for _ in range(self.m):
            s ^= x
            x = f.mul_int(x, x)
        if s not in (0, 1):
            raise ArithmeticError(f"subfield trace landed outside GF(2): {s}")
        return s

    def elements(self) -> np.ndarray:
        return self.coords_to_element


@lru_cache(maxsize=None)
def embedding_for(k: int, m: int, modulus: int | None = None) -> SubfieldEmbedding:
    return SubfieldEmbedding(field_for(k, modulus), m)


def subfield_trace(e: SubfieldEmbedding, a: FieldElement) -> int:
    if a.field is not e.parent:
        raise FieldMismatchError("element does not belong to the embedding's parent field")
    return e.trace_int(a.coords)
