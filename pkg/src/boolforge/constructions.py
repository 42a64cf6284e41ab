"""Boolean functions on GF(2^rm) x GF(2^m) built from half-intervals of powers of alpha.

With Delta_s = {alpha^i : s <= i < s + 2^(rm-1)}:

* the unbalanced function f has support {(gamma * y^u, y) : y != 0, gamma in Delta_s};
* the balanced function F adds the points {(gamma, 0) : gamma in Delta_l}.

Tables are built from supports.  The closed-form bivariate term lists are an
independent description used for cross-checking and degree computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boolfn import BivariateIndexer, BivariateTerm, TruthTable, indexer_for
from .gf2field import FieldSpec


class InvalidParameters(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionParams:
    """Parameter bundle (r, m, u, s, l); u is normalised into [1, 2^m - 2].

    ``modulus`` selects the primitive polynomial of GF(2^rm); None means the
    library default.
    """

    r: int
    m: int
    u: int = 1
    s: int = 0
    l: int = 0
    modulus: int | None = None
    u_inv: int = field(init=False)

    def __post_init__(self):
        r, m = self.r, self.m
        if r < 1 or r % 2 == 0:
            raise InvalidParameters(f"r must be an odd positive integer, got {r}")
        if m < 3:
            raise InvalidParameters(f"m must be at least 3, got {m}")
        if r * m > 24:
            raise InvalidParameters(f"rm = {r * m} exceeds the supported field size")
        q1 = (1 << m) - 1
        if math.gcd(self.u, q1) != 1:
            raise InvalidParameters(f"u = {self.u} is not coprime to 2^m - 1 = {q1}")
        object.__setattr__(self, "u", self.u % q1)
        object.__setattr__(self, "u_inv", pow(self.u, -1, q1))
        top = (1 << (r * m)) - 2
        for name in ("s", "l"):
            v = getattr(self, name)
            if not 0 <= v <= top:
                raise InvalidParameters(f"{name} must be in [0, {top}], got {v}")

    @property
    def rm(self) -> int:
        return self.r * self.m

    @property
    def n(self) -> int:
        return (self.r + 1) * self.m

    @property
    def q1(self) -> int:
        return (1 << self.m) - 1

    def indexer(self) -> BivariateIndexer:
        return indexer_for(self.rm, self.m, self.modulus)

    def as_dict(self) -> dict:
        return {"r": self.r, "m": self.m, "u": self.u, "s": self.s, "l": self.l,
                "modulus": self.indexer().field.modulus}


def valid_exponents(m: int) -> list[int]:
    """Representatives u in [1, 2^m - 2] coprime to 2^m - 1."""
    q1 = (1 << m) - 1
    return [u for u in range(1, q1) if math.gcd(u, q1) == 1]


def carlet_feng(spec: FieldSpec, l: int = 0) -> TruthTable:
    """k-variable function whose support is Delta_l (0 is not in the support)."""
    return TruthTable.from_support(spec.k, spec.delta_array(l))


def _f_support(p: ConstructionParams) -> np.ndarray:
    ix = p.indexer()
    f, emb = ix.field, ix.embedding
    gamma_exp = f.delta_exponents(p.s)
    chunks = []
    for c in range(1, emb.q):
        ly = f.dlog_int(int(emb.coords_to_element[c]))
        xs = f.antilog_table[(gamma_exp + p.u * ly) % f.order]
        chunks.append((xs << p.m) | c)
    return np.concatenate(chunks)


def construct_unbalanced(p: ConstructionParams) -> TruthTable:
    return TruthTable.from_support(p.n, _f_support(p))


def construct_balanced(p: ConstructionParams) -> TruthTable:
    f = p.indexer().field
    extra = f.delta_array(p.l) << p.m
    return TruthTable.from_support(p.n, np.concatenate([_f_support(p), extra]))


def quotient_form(p: ConstructionParams, g: TruthTable) -> TruthTable:
    """The table (x, y) -> g(x / y^u) for y != 0 and 0 on the line y = 0."""
    ix = p.indexer()
    if g.n != p.rm:
        raise ValueError(f"g must have {p.rm} variables, got {g.n}")
    f = ix.field
    xs, ys = ix.x_values, ix.y_values
    nz = ys != 0
    z = np.zeros_like(xs)
    z[nz] = f.mul_array(xs[nz], f.pow_array(ys[nz], -p.u))
    return TruthTable(p.n, np.where(nz, g.bits[z], 0))


def _interval_coeff_logs(f: FieldSpec, shift: int) -> np.ndarray:
    """log of alpha^(-i*shift) * (1 + alpha^(-i))^(2^(k-1) - 1) for i = 1 .. 2^k - 2.

    These are the univariate coefficients of the indicator of Delta_shift.
    """
    i = np.arange(1, f.order, dtype=np.int64)
    one_plus = f.antilog_table[(-i) % f.order] ^ 1
    logs = f.log_table[one_plus]
    return (-i * shift + ((f.size >> 1) - 1) * logs) % f.order


def interval_indicator_terms(f: FieldSpec, shift: int) -> list[tuple[int, int]]:
    """Univariate form of carlet_feng(f, shift) as (exponent, coefficient) pairs."""
    logs = _interval_coeff_logs(f, shift)
    return [(i, int(f.antilog_table[e])) for i, e in enumerate(logs, start=1)]


def closed_form_terms(p: ConstructionParams, balanced: bool = False) -> list[BivariateTerm]:
    """Bivariate representation of f, or of F = f + omega(x)(1 + y^(2^m - 1))."""
    f = p.indexer().field
    q1 = p.q1
    acc: dict[tuple[int, int], int] = {}

    def put(i: int, j: int, c: int) -> None:
        acc[(i, j)] = acc.get((i, j), 0) ^ c

    g_terms = interval_indicator_terms(f, p.s)
    for i, c in g_terms:
        if i % q1:
            put(i, q1 - (p.u * i) % q1, c)
        else:
            put(i, q1, c)
    if balanced:
        for i, c in interval_indicator_terms(f, p.l):
            put(i, 0, c)
            put(i, q1, c)
    return [BivariateTerm(i, j, c) for (i, j), c in sorted(acc.items()) if c]
