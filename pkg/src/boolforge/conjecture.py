"""Exact counting for the generalised Tu-Deng conjecture.

For odd r, n = (r+1)m and u coprime to 2^m - 1,

    S_t = {(a, b) : 0 <= a <= 2^rm - 2, 0 <= b <= 2^m - 1,
           u a + b = t (mod 2^m - 1), wt(a) + wt(b) <= n/2 - 1}

and the conjecture asserts |S_t| <= 2^(rm-1) for every t.  Both b = 0 and
b = 2^m - 1 solve b = 0 (mod 2^m - 1); the latter has weight m.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


def _check(r: int, m: int, u: int) -> None:
    if r < 1 or r % 2 == 0:
        raise ValueError(f"r must be an odd positive integer, got {r}")
    if m < 2:
        raise ValueError(f"m must be at least 2, got {m}")
    if r * m > 30:
        raise ValueError(f"rm = {r * m} is too large to enumerate")
    if math.gcd(u, (1 << m) - 1) != 1:
        raise ValueError(f"u = {u} is not coprime to 2^m - 1")


def _popcount_range(bits: int) -> np.ndarray:
    return np.bitwise_count(np.arange((1 << bits) - 1, dtype=np.uint32)).astype(np.int64)


def st_count(r: int, m: int, u: int, t: int) -> int:
    """|S_t| by a pass over a with the b candidates resolved in O(1) each."""
    _check(r, m, u)
    q1 = (1 << m) - 1
    if not 0 <= t < q1:
        raise ValueError(f"t must be in [0, {q1 - 1}], got {t}")
    budget = (r + 1) * m // 2 - 1
    a = np.arange((1 << (r * m)) - 1, dtype=np.int64)
    wa = np.bitwise_count(a.astype(np.uint32)).astype(np.int64)
    b0 = (t - (u % q1) * (a % q1)) % q1
    wb0 = np.bitwise_count(b0.astype(np.uint32)).astype(np.int64)
    count = np.count_nonzero(wa + wb0 <= budget)
    # b = 2^m - 1 is a second candidate exactly when b0 = 0
    count += np.count_nonzero((b0 == 0) & (wa + m <= budget))
    return int(count)


@dataclass
class ConjectureReport:
    r: int
    m: int
    u: int
    counts: list[int]
    bound: int = field(init=False)
    outside_verified_range: bool = field(init=False)

    def __post_init__(self):
        self.bound = 1 << (self.r * self.m - 1)
        self.outside_verified_range = self.m < 3

    @property
    def holds(self) -> bool:
        return all(c <= self.bound for c in self.counts)

    @property
    def max_t(self) -> int:
        return int(np.argmax(self.counts))

    @property
    def max_count(self) -> int:
        return max(self.counts)

    def as_dict(self, with_counts: bool = True) -> dict:
        out = {"r": self.r, "m": self.m, "u": self.u, "bound": self.bound, "holds": self.holds,
               "max_t": self.max_t, "max_count": self.max_count,
               "outside_verified_range": self.outside_verified_range}
        if with_counts:
            out["counts"] = list(self.counts)
        return out


def _weight_residue_histogram(r: int, m: int, u: int) -> np.ndarray:
    """hist[w, c] = #{a in [0, 2^rm - 2] : wt(a) = w, u a = c (mod 2^m - 1)}."""
    q1 = (1 << m) - 1
    rm = r * m
    hist = np.zeros((rm + 1, q1), dtype=np.int64)
    step = 1 << 22
    top = (1 << rm) - 1
    for start in range(0, top, step):
        a = np.arange(start, min(top, start + step), dtype=np.int64)
        w = np.bitwise_count(a.astype(np.uint32)).astype(np.int64)
        c = ((u % q1) * (a % q1)) % q1
        hist += np.bincount(w * q1 + c, minlength=(rm + 1) * q1).reshape(rm + 1, q1)
    return hist


def verify_conjecture(r: int, m: int, u: int) -> ConjectureReport:
    """All |S_t| at once from the (weight, residue) histogram of a."""
    _check(r, m, u)
    q1 = (1 << m) - 1
    budget = (r + 1) * m // 2 - 1
    hist = _weight_residue_histogram(r, m, u)
    # bcount[w, c] = #{b in [0, 2^m - 1] : wt(b) = w, b = c (mod 2^m - 1)}
    bvals = np.arange(q1 + 1)
    bcount = np.zeros((m + 1, q1), dtype=np.int64)
    np.add.at(bcount, (np.bitwise_count(bvals.astype(np.uint32)).astype(np.int64), bvals % q1), 1)
    counts = np.zeros(q1, dtype=np.int64)
    for wa in range(hist.shape[0]):
        row = hist[wa]
        if not row.any() or wa > budget:
            continue
        allowed = bcount[: max(0, min(m, budget - wa)) + 1].sum(axis=0)  # by residue of b
        # counts[t] += sum_c row[c] * allowed[(t - c) mod q1]
        for c in np.flatnonzero(row):
            counts += row[c] * np.roll(allowed, c)
    return ConjectureReport(r, m, u % q1 if q1 > 1 else u, counts.tolist())


def coprime_exponents(m: int) -> list[int]:
    q1 = (1 << m) - 1
    return [u for u in range(1, q1) if math.gcd(u, q1) == 1] if q1 > 1 else [1]


# reference verification grid
REFERENCE_GRID: tuple[tuple[int, int, str | int], ...] = (
    (3, 3, "all"), (3, 4, "all"), (3, 5, "all"), (3, 6, "all"), (3, 7, "all"),
    (5, 3, "all"), (5, 4, "all"),
    (7, 3, "all"),
    (3, 8, 1),
)


def expand_grid(specs: Iterable[tuple[int, int, str | int | Sequence[int]]]) -> list[tuple[int, int, int]]:
    out = []
    for r, m, us in specs:
        if us == "all":
            out.extend((r, m, u) for u in coprime_exponents(m))
        elif isinstance(us, int):
            out.append((r, m, us))
        else:
            out.extend((r, m, int(u)) for u in us)
    return out


def _run(job: tuple[int, int, int]) -> ConjectureReport:
    return verify_conjecture(*job)


def verify_grid(specs: Iterable[tuple[int, int, str | int | Sequence[int]]],
                jobs: int = 1) -> list[ConjectureReport]:
    """verify_conjecture for every (r, m, u) in the expanded specs, in input order."""
    work = expand_grid(specs)
    if jobs <= 1 or len(work) <= 1:
        return [_run(j) for j in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run, work))
