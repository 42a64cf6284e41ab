"""Walsh-Hadamard spectra, nonlinearity and the exact character sums over Delta_s."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boolfn import BivariateIndexer, TruthTable
from .gf2field import FieldElement, FieldMismatchError, SubfieldEmbedding


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised fast Walsh-Hadamard transform along a length-2^n vector (copy)."""
    a = np.array(values, dtype=np.int64 if values.size > (1 << 24) else np.int32, copy=True)
    h = 1
    while h < a.size:
        view = a.reshape(-1, 2, h)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] += hi
        np.subtract(lo, hi, out=view[:, 1, :])
        h <<= 1
    return a


@dataclass(frozen=True)
class WalshSpectrum:
    """W(w) = sum_z (-1)^(f(z) + w.z) over point-index coordinates z."""

    n: int
    values: np.ndarray

    def max_abs(self) -> int:
        return int(np.abs(self.values).max())

    def parseval_holds(self) -> bool:
        v = self.values.astype(np.int64)
        return int(np.dot(v, v)) == 1 << (2 * self.n)

    def __getitem__(self, w: int) -> int:
        return int(self.values[w])


def walsh_spectrum(tt: TruthTable) -> WalshSpectrum:
    signs = 1 - 2 * tt.bits.astype(np.int32)
    values = fwht(signs)
    values.flags.writeable = False
    return WalshSpectrum(tt.n, values)


def nonlinearity(tt: TruthTable | WalshSpectrum) -> int:
    spec = tt if isinstance(tt, WalshSpectrum) else walsh_spectrum(tt)
    return (1 << (spec.n - 1)) - spec.max_abs() // 2


def is_bent(tt: TruthTable | WalshSpectrum) -> bool:
    spec = tt if isinstance(tt, WalshSpectrum) else walsh_spectrum(tt)
    if spec.n % 2:
        raise ValueError("bent functions need an even number of variables")
    return bool(np.all(np.abs(spec.values) == 1 << (spec.n // 2)))


def dual_index(indexer: BivariateIndexer, a: int, b: int) -> int:
    """Spectrum index w with w.z = Tr(a x) + tr(b y) for every point z = (x, y)."""
    f, emb = indexer.field, indexer.embedding
    w = 0
    for i in range(indexer.n1):
        w |= f.trace_int(f.mul_int(a, 1 << i)) << (indexer.n2 + i)
    for j, bj in enumerate(emb.subfield_basis):
        w |= emb.trace_int(f.mul_int(b, bj)) << j
    return w


def walsh_at(tt: TruthTable, indexer: BivariateIndexer, a: FieldElement | int,
             b: FieldElement | int) -> int:
    """W_f(a, b) = sum (-1)^(f(x,y) + Tr(a x) + tr(b y)) by direct summation."""
    f, emb = indexer.field, indexer.embedding
    for v in (a, b):
        if isinstance(v, FieldElement) and v.field is not f:
            raise FieldMismatchError("Walsh point does not belong to the parent field")
    a, b = int(a), int(b)
    if not emb.contains(b):
        raise ValueError(f"b = {b:#x} is not in the subfield GF(2^{emb.m})")
    if tt.n != indexer.n:
        raise ValueError("table size does not match the indexer")
    tr_x = f.trace_array(f.mul_array(indexer.x_values, np.full(1 << tt.n, a)))
    tr_y_low = np.array([emb.trace_int(f.mul_int(b, int(y))) for y in emb.coords_to_element],
                        dtype=np.uint8)
    tr_y = tr_y_low[np.arange(1 << tt.n) & (emb.q - 1)]
    e = tt.bits ^ tr_x ^ tr_y
    return int((1 << tt.n) - 2 * np.count_nonzero(e))


def _exp_signs(e: SubfieldEmbedding) -> np.ndarray:
    """(-1)^Tr(alpha^t) for t in [0, 2^k - 2]."""
    f = e.parent
    return 1 - 2 * f.trace_array(f.antilog_table).astype(np.int64)


def _subfield_signs(e: SubfieldEmbedding, u: int) -> np.ndarray:
    """(-1)^tr(beta^(j u)) for j in [0, 2^m - 2]."""
    f = e.parent
    q1 = e.q - 1
    return np.array([1 - 2 * e.trace_int(f.exp_int(e.index_ratio * ((j * u) % q1)))
                     for j in range(q1)], dtype=np.int64)


def _character_sum(e: SubfieldEmbedding, s: int, ysigns: np.ndarray) -> int:
    f = e.parent
    signs = _exp_signs(e)
    gamma = f.delta_exponents(s)
    total = 0
    # y = beta^j = alpha^(N j), so gamma * y = alpha^(i + N j)
    for j, sy in enumerate(ysigns):
        total += int(sy) * int(signs[(gamma + e.index_ratio * j) % f.order].sum())
    return total


def lambda_sum(e: SubfieldEmbedding, s: int) -> int:
    """sum over gamma in Delta_s, y in GF(2^m)* of (-1)^Tr(gamma y)."""
    return _character_sum(e, s, np.ones(e.q - 1, dtype=np.int64))


def gamma_sum(e: SubfieldEmbedding, s: int, u: int) -> int:
    """sum over gamma in Delta_s, y in GF(2^m)* of (-1)^(Tr(gamma y) + tr(y^u))."""
    if math.gcd(u, e.q - 1) != 1:
        raise ValueError(f"u = {u} is not coprime to 2^m - 1")
    return _character_sum(e, s, _subfield_signs(e, u))
