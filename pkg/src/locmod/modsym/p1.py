"""The projective line P^1(Z/N) with canonical representatives.

Classes are indexed through the Chinese remainder theorem: for each prime
power m = l^k exactly dividing N the local class of (c : d) is

* ``c * d^-1 mod m``          when d is a unit mod m, giving ``0 .. m-1``;
* ``m + (d * c^-1 mod m) / l`` otherwise, giving ``m .. m + m/l - 1``.

The global index is the mixed-radix combination of the local ones.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..arith import crt_basis, factor


class P1Table:
    def __init__(self, N: int):
        if N < 1:
            raise ValueError(f"level must be positive, got {N}")
        self.N = N
        self.factors = factor(N)
        self._mods = [q**k for q, k in self.factors]
        self._sizes = [m + m // q for (q, _), m in zip(self.factors, self._mods)]
        self._inv = []
        for m in self._mods:
            inv = np.full(m, -1, dtype=np.int64)
            for u in range(m):
                try:
                    inv[u] = pow(u, -1, m)
                except ValueError:
                    pass
            self._inv.append(inv)
        radix = []
        r = 1
        for s in reversed(self._sizes):
            radix.append(r)
            r *= s
        self._radix = list(reversed(radix))
        self.size = r
        self.c, self.d = self._representatives()

    def _representatives(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.arange(self.size, dtype=np.int64)
        c = np.zeros(self.size, dtype=np.int64)
        d = np.zeros(self.size, dtype=np.int64)
        basis = crt_basis(self._mods)
        N = self.N
        for (q, _), m, size, rad, e in zip(self.factors, self._mods, self._sizes, self._radix, basis):
            loc = idx // rad % size
            lc = np.where(loc < m, loc, 1)
            ld = np.where(loc < m, 1, q * (loc - m))
            c = (c + lc * e) % N
            d = (d + ld * e) % N
        if N == 1:
            d[:] = 0
        return c, d

    def __len__(self) -> int:
        return self.size

    def lookup(self, c, d) -> np.ndarray:
        """Indices of the classes of (c : d); -1 where gcd(c, d, N) > 1."""
        c = np.asarray(c, dtype=np.int64)
        d = np.asarray(d, dtype=np.int64)
        out = np.zeros(np.broadcast(c, d).shape, dtype=np.int64)
        bad = np.zeros(out.shape, dtype=bool)
        for (q, _), m, rad, inv in zip(self.factors, self._mods, self._radix, self._inv):
            cm = c % m
            dm = d % m
            di = inv[dm]
            ci = inv[cm]
            unit_d = di >= 0
            loc = np.where(unit_d, cm * np.where(unit_d, di, 0) % m, 0)
            t = dm * np.where(ci >= 0, ci, 0) % m
            loc = np.where(unit_d, loc, m + t // q)
            bad |= ~unit_d & (ci < 0)
            out += loc * rad
        return np.where(bad, -1, out)

    def index(self, c: int, d: int) -> int:
        return int(self.lookup(c, d))

    def representative(self, i: int) -> tuple[int, int]:
        return int(self.c[i]), int(self.d[i])

    def __repr__(self):
        return f"P1Table(N={self.N}, {self.size} classes)"


@lru_cache(maxsize=256)
def p1_table(N: int) -> P1Table:
    return P1Table(N)
