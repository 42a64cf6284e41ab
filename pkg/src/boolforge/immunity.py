"""Algebraic immunity and fast-algebraic-attack pairs via GF(2) rank computations.

Annihilators of degree <= d are the dependencies among the evaluation
vectors (restricted to the support) of the monomials of degree <= d.  The
monomials are fed to an XorBasis in graded order, so raising d only appends
the next degree block.

A pair (e, d) is admitted when some g with deg g <= e has g F != 0 and
deg(g F) <= d.  The ANF of g F is linear in the coefficients of g: it is
sum_I g_I ANF(x^I F).  Such g are dependencies among the columns
ANF(x^I F) once every mask U of weight <= d is zeroed out.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .boolfn import AnfPolynomial, TruthTable, mobius_words, n_words, pack_bits, popcounts
from .gf2linalg import XorBasis, ids_of

Progress = Callable[[str], None] | None

# columns evaluated per block; bounds the unpacked temporary at CHUNK x |supp| bytes
_CHUNK = 2048


class BudgetExceeded(RuntimeError):
    pass


@lru_cache(maxsize=None)
def graded_monomials(n: int, d: int) -> np.ndarray:
    """All masks of weight <= d, ordered by weight then value."""
    pc = popcounts(n)
    masks = np.flatnonzero(pc <= d)
    order = np.lexsort((masks, pc[masks]))
    out = masks[order].astype(np.int64)
    out.flags.writeable = False
    return out


def monomial_count(n: int, d: int) -> int:
    return sum(math.comb(n, k) for k in range(0, min(d, n) + 1))


def _eval_columns(support: np.ndarray, monomials: np.ndarray) -> np.ndarray:
    """Packed evaluation vectors [I subset of x] over the support points, one row per I."""
    out = []
    for start in range(0, monomials.size, _CHUNK):
        blk = monomials[start:start + _CHUNK]
        bits = (support[None, :] & blk[:, None]) == blk[:, None]
        out.append(pack_bits(bits.astype(np.uint8)))
    if not out:
        return np.zeros((0, max(1, (support.size + 63) >> 6)), np.uint64)
    return np.concatenate(out)


def _anf_from_ids(n: int, monomials: np.ndarray, id_set: np.ndarray) -> AnfPolynomial:
    return AnfPolynomial.from_monomials(n, monomials[ids_of(id_set, monomials.size)].tolist())


def annihilator_space_dim(tt: TruthTable, d: int) -> int:
    """dim {g : deg g <= d, g tt = 0}."""
    if not 0 <= d <= tt.n:
        raise ValueError(f"degree must be in [0, {tt.n}]")
    mons = graded_monomials(tt.n, d)
    supp = tt.support()
    if supp.size == 0:
        return int(mons.size)
    basis = XorBasis(supp.size, mons.size, track=False)
    basis.insert(_eval_columns(supp, mons))
    return int(mons.size) - basis.rank


@dataclass
class AiReport:
    n: int
    ai: int
    witness: AnfPolynomial
    side: str  # "f" or "f+1"

    def as_dict(self) -> dict:
        return {"n": self.n, "ai": self.ai, "side": self.side,
                "witness_monomials": self.witness.monomials().tolist()}


class _AnnihilatorSearch:
    def __init__(self, tt: TruthTable, max_degree: int):
        self.n = tt.n
        self.support = tt.support()
        self.mons = graded_monomials(tt.n, max_degree)
        self.basis = XorBasis(max(1, self.support.size), self.mons.size)
        self.done = 0

    def extend_to(self, d: int) -> np.ndarray | None:
        """Append monomials of degree <= d; return one dependency if any appears."""
        stop = int(np.searchsorted(popcounts(self.n)[self.mons], d, side="right"))
        found = None
        for start in range(self.done, stop, _CHUNK):
            blk = self.mons[start:min(stop, start + _CHUNK)]
            deps = self.basis.insert(_eval_columns(self.support, blk))
            if found is None and len(deps):
                found = deps[0]
            if found is not None:
                break
        self.done = self.basis.inserted
        return found


def verify_annihilator(g: AnfPolynomial, tt: TruthTable) -> bool:
    return not g.is_zero() and not np.any(g.evaluate().bits & tt.bits)


def algebraic_immunity(tt: TruthTable, progress: Progress = None) -> AiReport:
    n = tt.n
    if tt.is_constant():
        side = "f" if tt.weight() == 0 else "f+1"
        return AiReport(n, 0, AnfPolynomial.from_monomials(n, [0]), side)
    top = (n + 1) // 2
    searches = {"f": _AnnihilatorSearch(tt, top), "f+1": _AnnihilatorSearch(tt.complement(), top)}
    for d in range(top + 1):
        for side, target in (("f", tt), ("f+1", tt.complement())):
            if progress:
                progress(f"ai: checking degree {d} annihilators of {side}")
            dep = searches[side].extend_to(d)
            if dep is not None:
                g = _anf_from_ids(n, searches[side].mons, dep)
                if not verify_annihilator(g, target) or g.degree != d:
                    raise ArithmeticError("extracted annihilator failed re-verification")
                return AiReport(n, d, g, side)
    raise ArithmeticError("no annihilator up to ceil(n/2); rank computation is inconsistent")


# fast algebraic attacks

class FaaSystem:
    """Columns ANF(x^I F) for all monomials I of weight <= max_e, built once per function."""

    def __init__(self, tt: TruthTable, max_e: int):
        n = tt.n
        self.tt = tt
        self.n = n
        self.max_e = max_e
        self.mons = graded_monomials(n, max_e)
        idx = np.arange(1 << n, dtype=np.int64)
        fbits = tt.bits.astype(bool)
        self.columns = np.empty((self.mons.size, n_words(n)), dtype=np.uint64)
        for start in range(0, self.mons.size, _CHUNK):
            blk = self.mons[start:start + _CHUNK]
            prod = ((idx[None, :] & blk[:, None]) == blk[:, None]) & fbits[None, :]
            self.columns[start:start + blk.size] = mobius_words(pack_bits(prod.astype(np.uint8)), n)
        self._masks: dict[tuple[int, int], np.ndarray] = {}

    def row_mask(self, lo: int, hi: int) -> np.ndarray:
        """Packed indicator of masks U with lo < wt(U) <= hi."""
        key = (lo, hi)
        if key not in self._masks:
            pc = popcounts(self.n)
            self._masks[key] = pack_bits(((pc > lo) & (pc <= hi)).astype(np.uint8))
        return self._masks[key]

    def dependencies(self, e: int, d: int, hi: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Null-space basis of the columns of weight <= e restricted to d < wt(U) <= hi."""
        hi = self.n if hi is None else hi
        k = monomial_count(self.n, e)
        mons = self.mons[:k]
        cols = self.columns[:k] & self.row_mask(d, hi)
        basis = XorBasis(1 << self.n, k)
        return basis.insert(cols), mons


def product_anf(g: AnfPolynomial, tt: TruthTable) -> AnfPolynomial:
    return (g.evaluate() & tt).anf()


def has_faa_pair(tt: TruthTable, e: int, d: int, system: FaaSystem | None = None,
                 slack: int = 2) -> tuple[bool, AnfPolynomial | None]:
    """Is there g != 0 with deg g <= e, g tt != 0 and deg(g tt) <= d?"""
    n = tt.n
    if not (1 <= e and 2 * e < n and e <= d < n):
        raise ValueError(f"need 1 <= e < n/2 and e <= d < n, got e={e}, d={d}, n={n}")
    if system is None or system.max_e < e:
        system = FaaSystem(tt, e)
    # staged: a trivial null space on a subset of the constraint rows already rules the pair out
    hi = min(n, d + e + slack)
    if hi < n:
        deps, _ = system.dependencies(e, d, hi)
        if len(deps) == 0:
            return False, None
    deps, mons = system.dependencies(e, d)
    for dep in deps:
        g = _anf_from_ids(n, mons, dep)
        prod = product_anf(g, tt)
        if prod.is_zero():
            continue  # annihilator, counted by AI rather than FAA
        if g.degree > e or prod.degree > d:
            raise ArithmeticError("FAA witness failed re-verification")
        return True, g
    return False, None


@dataclass
class FaaEntry:
    e: int
    d: int
    exists: bool
    witness: AnfPolynomial | None = None

    def as_dict(self) -> dict:
        out = {"e": self.e, "d": self.d, "exists": self.exists}
        if self.witness is not None:
            out["witness_monomials"] = self.witness.monomials().tolist()
        return out


@dataclass
class FaaReport:
    n: int
    max_ed_sum: int
    entries: list[FaaEntry] = field(default_factory=list)
    complete: bool = True

    @property
    def min_ed_sum(self) -> int | None:
        found = [x.e + x.d for x in self.entries if x.exists]
        return min(found) if found else None

    def region(self) -> str:
        return f"1 <= e < {self.n}/2, e <= d, e + d <= {self.max_ed_sum}"

    def as_dict(self) -> dict:
        return {"n": self.n, "max_ed_sum": self.max_ed_sum, "region": self.region(),
                "complete": self.complete, "min_ed_sum": self.min_ed_sum,
                "entries": [x.as_dict() for x in self.entries]}


def faa_cells(n: int, max_ed_sum: int) -> list[tuple[int, int]]:
    cells = []
    for e in range(1, (n + 1) // 2):
        for d in range(e, min(n - 1, max_ed_sum - e) + 1):
            cells.append((e, d))
    return cells


def faa_scan(tt: TruthTable, max_ed_sum: int, budget: float | None = None,
             progress: Progress = None) -> FaaReport:
    """Record existence of an FAA pair for every cell with e + d <= max_ed_sum.

    ``budget`` is a wall-clock limit in seconds; when it runs out the report
    is returned with ``complete = False``.
    """
    t0 = time.monotonic()
    report = FaaReport(tt.n, max_ed_sum)
    cells = faa_cells(tt.n, max_ed_sum)
    if not cells:
        return report
    system = FaaSystem(tt, max(e for e, _ in cells))
    for e, d in cells:
        if budget is not None and time.monotonic() - t0 > budget:
            report.complete = False
            break
        if progress:
            progress(f"faa: cell e={e} d={d}")
        exists, g = has_faa_pair(tt, e, d, system)
        report.entries.append(FaaEntry(e, d, exists, g))
    return report
