"""Closed-form estimates used to lower-bound the nonlinearity of the balanced construction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

LN2_PI = math.log(2) / math.pi

TABLE_I_N = tuple(range(6, 27, 2))


def trig_sum_exact(T: int) -> float:
    """sum_{i=1}^{T-1} 1 / sin(pi i / (2T))."""
    if T < 2:
        raise ValueError("T must be at least 2")
    return math.fsum(1.0 / math.sin(math.pi * i / (2 * T)) for i in range(1, T))


@njit(cache=True)
def _trig_sweep(t0, t1, out):
    for T in range(t0, t1 + 1):
        th = math.pi / (2 * T)
        c, s = math.cos(th), math.sin(th)
        x, y = c, s
        acc = 0.0
        for i in range(1, T):
            # rotate by th each step, re-anchored periodically so drift stays ~1e-14
            if (i & 1023) == 0:
                x, y = math.cos(i * th), math.sin(i * th)
            acc += 1.0 / y
            x, y = x * c - y * s, x * s + y * c
        out[T - t0] = acc


def trig_sum_sweep(t0: int, t1: int) -> np.ndarray:
    """trig_sum_exact(T) for every T in [t0, t1], in one compiled pass."""
    if t0 < 2 or t1 < t0:
        raise ValueError("need 2 <= t0 <= t1")
    out = np.empty(t1 - t0 + 1)
    _trig_sweep(t0, t1, out)
    return out


def trig_bounds_array(T: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    T = np.asarray(T, dtype=np.float64)
    lower = 2 * T * (np.log(T) / math.pi + 0.163)
    upper = 2 * T * (np.log(T) / math.pi + 0.263) + 3 * math.pi / (8 * T)
    return lower, upper


def trig_sum_bounds(T: int) -> tuple[float, float]:
    """Claimed bracket around trig_sum_exact(T).

    The lower end fails at T = 2 (1.5346 > sqrt 2); it holds from T = 3 on.
    """
    if T < 2:
        raise ValueError("T must be at least 2")
    lower = 2 * T * (math.log(T) / math.pi + 0.163)
    upper = 2 * T * (math.log(T) / math.pi + 0.263) + 3 * math.pi / (8 * T)
    return lower, upper


def _shape(n: int, m: int) -> int:
    if m < 1 or n <= m or n % m:
        raise ValueError(f"n = {n} is not a multiple (r + 1) m of m = {m}")
    r = n // m - 1
    if r % 2 == 0:
        raise ValueError(f"r = n/m - 1 = {r} must be odd")
    return r


def lambda_bound(n: int, m: int) -> float:
    """Bound on |Lambda_s|; exact value 2^(m-1) when r = 1."""
    r = _shape(n, m)
    if r == 1:
        return float(1 << (m - 1))
    return ((n - 2 * m) * LN2_PI + 0.263) * 2 ** ((n - m) / 2) + 2 ** (m - 1) + 1


def gamma_bound(n: int, m: int) -> float:
    _shape(n, m)
    return (((n - m) * LN2_PI + 0.263) * 2 ** (n / 2)
            - ((n - 2 * m) * LN2_PI + 0.163) * 2 ** (n / 2 - m) + 2)


def cf_walsh_bound(k: int) -> float:
    """Bound on |W| for a k-variable Carlet-Feng function."""
    if k < 1:
        raise ValueError("k must be positive")
    return (k * LN2_PI + 0.485) * 2 ** (k / 2 + 1)


def walsh_case_bounds(n: int, m: int) -> dict[str, float]:
    """Bounds on |W_F(a, 0)| for a != 0 and on |W_F(a, b)| for ab != 0."""
    r = _shape(n, m)
    if r == 1:
        b_zero = ((n - m) * LN2_PI + 0.485) * 2 ** ((n - m) / 2 + 1) + 2 ** m
    else:
        b_zero = ((2 * n - 3 * m) * LN2_PI + 0.748) * 2 ** ((n - m) / 2 + 1) + 2 ** m + 2
    both = (2 * ((n - m) * LN2_PI + 0.263) * 2 ** (n / 2)
            + 2 * ((n - m) * LN2_PI + 0.485) * 2 ** ((n - m) / 2)
            - 2 * ((n - 2 * m) * LN2_PI + 0.163) * 2 ** (n / 2 - m) + 4)
    return {"a_nonzero_b_zero": b_zero, "ab_nonzero": both}


@dataclass(frozen=True)
class BoundReport:
    n: int
    m: int
    term_main: float
    term_cf: float
    term_correction: float
    raw: float
    rounded: int

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "term_main": self.term_main, "term_cf": self.term_cf,
                "term_correction": self.term_correction, "raw": self.raw, "rounded": self.rounded}


def nl_lower_bound(n: int, m: int) -> BoundReport:
    _shape(n, m)
    main = ((n - m) * LN2_PI + 0.263) * 2 ** (n / 2)
    cf = ((n - m) * LN2_PI + 0.485) * 2 ** ((n - m) / 2)
    corr = ((n - 2 * m) * LN2_PI + 0.163) * 2 ** (n / 2 - m)
    raw = 2 ** (n - 1) - main - cf + corr - 2
    return BoundReport(n, m, main, cf, corr, raw, math.floor(raw + 0.5))


def table_one() -> list[BoundReport]:
    return [nl_lower_bound(n, n // 2) for n in TABLE_I_N]
