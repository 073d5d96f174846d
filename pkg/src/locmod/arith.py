"""Small integer helpers: factorization, primality, divisors."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

import numpy as np

LEVEL_CAP = 10**7

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)  # gaps between residues coprime to 30


@lru_cache(maxsize=65536)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division on a mod-30 wheel."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    for q in (2, 3, 5):
        if n % q == 0:
            k = 0
            while n % q == 0:
                n //= q
                k += 1
            out.append((q, k))
    q, i = 7, 0
    while q * q <= n:
        if n % q == 0:
            k = 0
            while n % q == 0:
                n //= q
                k += 1
            out.append((q, k))
        q += _WHEEL[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    return n >= 2 and factor(n) == ((n, 1),)


def omega(n: int) -> int:
    return len(factor(n))


def is_squarefree(n: int) -> bool:
    return all(k == 1 for _, k in factor(n))


def prime_divisors(n: int) -> list[int]:
    return [q for q, _ in factor(n)]


def divisors(n: int) -> list[int]:
    ds = [1]
    for q, k in factor(n):
        ds = [d * q**e for d in ds for e in range(k + 1)]
    return sorted(ds)


def sigma0(n: int) -> int:
    out = 1
    for _, k in factor(n):
        out *= k + 1
    return out


def euler_phi(n: int) -> int:
    out = n
    for q, _ in factor(n):
        out = out // q * (q - 1)
    return out


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for q in range(3, isqrt(n) + 1, 2):
        if flags[q]:
            flags[q * q :: 2 * q] = False
    return np.flatnonzero(flags).astype(np.int64)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def crt_basis(moduli: list[int]) -> list[int]:
    """Idempotents e_i with e_i = 1 mod m_i and 0 mod m_j (j != i)."""
    big = 1
    for m in moduli:
        big *= m
    out = []
    for m in moduli:
        rest = big // m
        out.append(rest * pow(rest, -1, m) % big if m > 1 else 0)
    return out


def _kron_m4(q: int) -> int:
    return 0 if q == 2 else (1 if q % 4 == 1 else -1)


def _kron_m3(q: int) -> int:
    if q == 3:
        return 0
    if q == 2:
        return -1
    return 1 if q % 3 == 1 else -1


def genus_x0(n: int) -> int:
    """Genus of X_0(N): 1 + mu/12 - nu2/4 - nu3/3 - cusps/2."""
    fac = factor(n)
    mu = gamma0_index(n)
    nu2 = 0
    if n % 4:
        nu2 = 1
        for q, _ in fac:
            nu2 *= 1 + _kron_m4(q)
    nu3 = 0
    if n % 9:
        nu3 = 1
        for q, _ in fac:
            nu3 *= 1 + _kron_m3(q)
    g12 = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * num_cusps_x0(n)
    assert g12 % 12 == 0
    return g12 // 12


def num_cusps_x0(n: int) -> int:
    return sum(euler_phi(gcd(d, n // d)) for d in divisors(n))


def gamma0_index(n: int) -> int:
    mu = n
    for q, _ in factor(n):
        mu = mu // q * (q + 1)
    return mu
