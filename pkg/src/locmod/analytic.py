"""Growth of sums of 2^omega(N) over squarefree N.

The Dirichlet series of 2^omega(N) on squarefree N has a double pole at
s = 1 with leading coefficient prod_p (1 - 3/p^2 + 2/p^3), so the sum over
[X, 2X] grows like that constant times X log X.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, log

import numpy as np

from .arith import primes_up_to

SEGMENT = 10**7
HI_CAP = 10**9
EULER_P = 10**6


@dataclass
class SieveTable:
    lo: int
    hi: int
    squarefree: np.ndarray  # bool, index N - lo
    omega: np.ndarray  # int8

    def at(self, N: int) -> tuple[bool, int]:
        if not self.lo <= N <= self.hi:
            raise IndexError(f"{N} outside [{self.lo}, {self.hi}]")
        i = N - self.lo
        return bool(self.squarefree[i]), int(self.omega[i])


def _segment(lo: int, hi: int, primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = hi - lo + 1
    rest = np.arange(lo, hi + 1, dtype=np.int64)
    om = np.zeros(n, dtype=np.int8)
    sf = np.ones(n, dtype=bool)
    for q in primes:
        q = int(q)
        if q * q > hi:
            # primes past sqrt(hi) only matter through the cofactor below
            break
        start = (-lo) % q
        idx = slice(start, n, q)
        om[idx] += 1
        rest[idx] //= q
        q2 = q * q
        start2 = (-lo) % q2
        sf[start2:n:q2] = False
        # strip the remaining powers so the cofactor test is clean
        sub = rest[idx]
        while True:
            m = sub % q == 0
            if not m.any():
                break
            sub[m] //= q
        rest[idx] = sub
    om += (rest > 1).astype(np.int8)
    return sf, om


def squarefree_omega(lo: int, hi: int) -> SieveTable:
    """Squarefree flags and distinct-prime counts on [lo, hi], segment by segment."""
    if not 1 <= lo <= hi <= HI_CAP:
        raise ValueError(f"need 1 <= lo <= hi <= {HI_CAP}, got [{lo}, {hi}]")
    if hi - lo + 1 > 4 * SEGMENT:
        raise MemoryError(f"table of {hi - lo + 1} entries is too large; use sum_2_omega for streaming sums")
    primes = primes_up_to(isqrt(hi))
    sfs, oms = [], []
    for a in range(lo, hi + 1, SEGMENT):
        b = min(a + SEGMENT - 1, hi)
        sf, om = _segment(a, b, primes)
        sfs.append(sf)
        oms.append(om)
    return SieveTable(lo, hi, np.concatenate(sfs), np.concatenate(oms))


def sum_2_omega_range(lo: int, hi: int) -> int:
    """Exact sum of 2^omega(N) over squarefree N in [lo, hi]."""
    if lo > hi:
        return 0
    if not 1 <= lo <= hi <= HI_CAP:
        raise ValueError(f"need 1 <= lo <= hi <= {HI_CAP}, got [{lo}, {hi}]")
    primes = primes_up_to(isqrt(hi))
    total = 0
    for a in range(lo, hi + 1, SEGMENT):
        b = min(a + SEGMENT - 1, hi)
        sf, om = _segment(a, b, primes)
        total += int(np.left_shift(np.int64(1), om[sf].astype(np.int64)).sum())
    return total


def sum_2_omega(X: int) -> int:
    """Sum of 2^omega(N) over squarefree N in [X, 2X]."""
    if X < 1:
        raise ValueError(f"X must be positive, got {X}")
    return sum_2_omega_range(X, 2 * X)


@dataclass(frozen=True)
class EulerConstant:
    P: int
    value: float
    tail_bound: float


def euler_constant(P: int = EULER_P) -> EulerConstant:
    """prod_{p <= P} (1 - 3 p^-2 + 2 p^-3) with a bound on the omitted tail.

    Each omitted factor lies in (1 - 3/p^2, 1), so the relative error is at
    most sum_{p > P} 3/p^2 < 3/(P - 1).
    """
    if P < 2:
        raise ValueError(f"truncation point must be at least 2, got {P}")
    ps = primes_up_to(P).astype(np.float64)
    val = float(np.exp(np.log1p(-3.0 / ps**2 + 2.0 / ps**3).sum()))
    return EulerConstant(P, val, 3.0 / (P - 1))


def leading_term(X: float) -> float:
    """2X ln 2X - X ln X, the leading-order size of the [X, 2X] sum per unit constant."""
    return 2 * X * log(2 * X) - X * log(X)


@dataclass(frozen=True)
class TauberianResult:
    x: int
    sum: int
    constant: float
    ratio: float
    tail_bound: float

    def to_json(self) -> dict:
        return {"x": self.x, "sum": self.sum, "constant": self.constant, "ratio": self.ratio, "tail_bound": self.tail_bound}


def tauberian(X: int, P: int = EULER_P) -> TauberianResult:
    if X < 1000:
        raise ValueError(f"X must be at least 1000, got {X}")
    c = euler_constant(P)
    s = sum_2_omega(X)
    return TauberianResult(X, s, c.value, s / (c.value * leading_term(X)), c.tail_bound)


def tauberian_ratio(X: int) -> float:
    return tauberian(X).ratio
