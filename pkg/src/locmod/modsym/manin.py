"""Weight-2 modular symbols for Gamma_0(N) over F_p, presented by Manin symbols.

A Manin symbol (c : d) in P^1(Z/N) stands for g{0, oo} where g in SL_2(Z)
has bottom row congruent to (c, d).  Matrices act on the right of the
bottom row.  The space is the quotient of the free F_p-module on P^1(Z/N)
by

    x + x S = 0,        S = [0 -1; 1 0]
    x + x T + x T^2 = 0, T = [0 -1; 1 -1]

and, for a nonzero ``sign``, additionally ``x = sign * x E`` with
E = [-1 0; 0 1] (the star involution).  ``sign=0`` gives the full space of
dimension 2g + #cusps - 1; ``sign=1`` gives its star-plus quotient, which is
isomorphic as a Hecke module to the +1 eigenspace of star.
"""

from __future__ import annotations

import logging
from collections import deque
from functools import cached_property, lru_cache
from math import gcd

import numpy as np
from scipy import sparse

from ..arith import is_prime, xgcd
from ..ffcore import FpMatrix, Subspace, intersect, kernel, kernel_basis
from .p1 import P1Table, p1_table

log = logging.getLogger(__name__)


class LevelError(ValueError):
    """Unsupported (level, characteristic) combination."""


def lift_to_sl2z(c: int, d: int, N: int) -> tuple[int, int, int, int]:
    """Integers (a, b, c', d') with a d' - b c' = 1 and (c', d') = (c, d) mod N."""
    if N == 1:
        return 1, 0, 0, 1
    c %= N
    d %= N
    if gcd(gcd(c, d), N) != 1:
        raise ValueError(f"({c} : {d}) is not in P^1(Z/{N})")
    cc = c if c else N
    dd = d
    while gcd(cc, dd) != 1:
        dd += N
    _, x, y = xgcd(cc, dd)
    # x cc + y dd = 1  =>  a = y, b = -x
    return y, -x, cc, dd


def _reduce_cusp(u: int, v: int) -> tuple[int, int]:
    g = gcd(u, v)
    u, v = u // g, v // g
    if v < 0 or (v == 0 and u < 0):
        u, v = -u, -v
    return u, v


def _cusp_data(u: int, v: int) -> tuple[int, int]:
    """(s, v) with s u = 1 mod v for the reduced cusp u/v."""
    if v == 0:
        return 1, 0
    if v == 1:
        return 0, 1
    return pow(u, -1, v), v


def cusps_equivalent(a: tuple[int, int], b: tuple[int, int], N: int) -> bool:
    """Gamma_0(N)-equivalence of cusps u1/v1 and u2/v2."""
    s1, v1 = _cusp_data(*_reduce_cusp(*a))
    s2, v2 = _cusp_data(*_reduce_cusp(*b))
    m = gcd(v1 * v2, N)
    return (s1 * v2 - s2 * v1) % m == 0 if m else s1 * v2 == s2 * v1


def zero_to_cusp(u: int, v: int) -> list[tuple[int, int]]:
    """Manin symbols (as integer pairs) summing to {0, u/v}, via continued fractions."""
    if v == 0:
        return [(0, 1)]
    if v < 0:
        u, v = -u, -v
    out = [(0, 1)]  # {0, oo}
    q_prev2, q_prev = 1, 0  # q_{-2}, q_{-1}
    k = 0
    a, b = u, v
    while b:
        t = a // b
        a, b = b, a - t * b
        q = t * q_prev + q_prev2
        sgn = 1 if k % 2 else -1  # (-1)^(k-1)
        out.append((sgn * q, q_prev))
        q_prev2, q_prev = q_prev, q
        k += 1
    return out


class ManinSpace:
    """Presented modular-symbol space for Gamma_0(N) over F_p."""

    def __init__(self, N: int, p: int, sign: int = 0):
        if N < 1 or N > 10**7:
            raise LevelError(f"level {N} out of range")
        if not is_prime(p) or p in (2, 3):
            raise LevelError(f"coefficient prime must be a prime >= 5, got {p}")
        if sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if N % p == 0:
            log.debug("level %d divisible by the coefficient prime %d", N, p)
        self.N = N
        self.p = p
        self.sign = sign
        self.p1: P1Table = p1_table(N)
        self._present()

    # -------------------------------------------------------- presentation

    def _present(self):
        p1, p, N = self.p1, self.p, self.N
        n = len(p1)
        c, d = p1.c, p1.d
        s_img = p1.lookup(d, -c)
        t_img = p1.lookup(d, -c - d)
        e_img = p1.lookup(-c, d)

        # two-term relations: orbits under S (sign -1) and E (sign self.sign)
        edge = np.full(n, -1, dtype=np.int64)
        esign = np.zeros(n, dtype=np.int64)
        reps = []
        moves = [(s_img, -1)]
        if self.sign:
            moves.append((e_img, self.sign))
        for start in range(n):
            if edge[start] != -1:
                continue
            orbit = {start: 1}
            queue = [start]
            dead = False
            while queue:
                x = queue.pop()
                for img, sg in moves:
                    y = int(img[x])
                    val = orbit[x] * sg
                    if y in orbit:
                        if orbit[y] != val:
                            dead = True
                    else:
                        orbit[y] = val
                        queue.append(y)
            eid = -2 if dead else len(reps)
            if not dead:
                reps.append(start)
            for x, v in orbit.items():
                edge[x] = eid
                esign[x] = 0 if dead else v
        n_edges = len(reps)

        # three-term relations, one per T-orbit
        rows = []
        seen = np.zeros(n, dtype=bool)
        for x in range(n):
            if seen[x]:
                continue
            orbit = [x]
            y = int(t_img[x])
            while y != x:
                orbit.append(y)
                y = int(t_img[y])
            row: dict[int, int] = {}
            for y in orbit:
                seen[y] = True
                e = int(edge[y])
                if e >= 0:
                    row[e] = row.get(e, 0) + int(esign[y])
            if len(orbit) == 1:
                row = {e: 3 * v for e, v in row.items()}
            row = {e: v % p for e, v in row.items() if v % p}
            if row:
                rows.append(row)

        free, expr = _sparse_quotient(n_edges, rows, p)
        col_of = {e: j for j, e in enumerate(free)}
        dim = len(free)

        # symbol -> coordinates, as a sparse (n x dim) matrix
        r_idx, c_idx, vals = [], [], []
        for x in range(n):
            e = int(edge[x])
            if e < 0:
                continue
            sg = int(esign[x])
            if e in col_of:
                r_idx.append(x)
                c_idx.append(col_of[e])
                vals.append(sg % p)
            else:
                for f, a in expr[e].items():
                    r_idx.append(x)
                    c_idx.append(col_of[f])
                    vals.append(sg * a % p)
        self.dim = dim
        self._proj = sparse.csr_matrix(
            (np.array(vals, dtype=np.int64), (np.array(r_idx, dtype=np.int64), np.array(c_idx, dtype=np.int64))),
            shape=(n, dim),
        )
        self._proj.sum_duplicates()
        self.generators = np.array([reps[e] for e in free], dtype=np.int64)

    # ------------------------------------------------------------ helpers

    def project(self, symbols) -> np.ndarray:
        """Sum of coordinate vectors of symbol indices (``-1`` entries are zero)."""
        idx = np.asarray(symbols, dtype=np.int64).ravel()
        idx = idx[idx >= 0]
        if idx.size == 0:
            return np.zeros(self.dim, dtype=np.int64)
        return np.asarray(self._proj[idx].sum(axis=0)).ravel() % self.p

    def symbol_vector(self, c: int, d: int) -> np.ndarray:
        return self.project([self.p1.index(c, d)])

    def pairs_matrix(self, images: list[np.ndarray], coeffs: list[int] | None = None) -> np.ndarray:
        """Dense dim x dim matrix whose column j is sum_k coeffs[k] * proj(images[k][j])."""
        p = self.p
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for k, img in enumerate(images):
            a = 1 if coeffs is None else coeffs[k]
            valid = img >= 0
            if not valid.any():
                continue
            cols = np.flatnonzero(valid)
            block = self._proj[img[valid]].toarray()  # (len(cols), dim)
            out[:, cols] += a * block.T
            out %= p
        return out

    def generator_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        g = self.generators
        return self.p1.c[g], self.p1.d[g]

    def right_action(self, m: tuple[int, int, int, int]) -> np.ndarray:
        """Indices of (c:d) * m for each generator."""
        a, b, c2, d2 = m
        c, d = self.generator_pairs()
        return self.p1.lookup(c * a + d * c2, c * b + d * d2)

    # ---------------------------------------------------- involutions etc.

    @cached_property
    def star_matrix(self) -> FpMatrix:
        """Matrix of the star involution (c : d) -> (-c : d)."""
        return FpMatrix(self.pairs_matrix([self.right_action((-1, 0, 0, 1))]), self.p)

    def general_symbol(self, u1: int, v1: int, u2: int, v2: int) -> np.ndarray:
        """Coordinates of {u1/v1, u2/v2}."""
        N = self.N
        pos = zero_to_cusp(u2, v2)
        neg = zero_to_cusp(u1, v1)
        vec = np.zeros(self.dim, dtype=np.int64)
        if pos:
            vec += self.project(self.p1.lookup([c % N for c, _ in pos], [d % N for _, d in pos]))
        if neg:
            vec -= self.project(self.p1.lookup([c % N for c, _ in neg], [d % N for _, d in neg]))
        return vec % self.p

    def lifts(self) -> list[tuple[int, int, int, int]]:
        c, d = self.generator_pairs()
        return [lift_to_sl2z(int(x), int(y), self.N) for x, y in zip(c, d)]

    def matrix_action(self, m: tuple[int, int, int, int], target: "ManinSpace | None" = None) -> np.ndarray:
        """Columns: coordinates in ``target`` of m * g{0, oo} for each generator g.

        ``m`` is an integer matrix (a, b, c, d); the image of {g0, g oo} is
        {m g 0, m g oo} rewritten through continued fractions.
        """
        target = target or self
        a, b, c, d = m
        cols = []
        for ga, gb, gc, gd in self.lifts():
            # m * g
            x11, x12 = a * ga + b * gc, a * gb + b * gd
            x21, x22 = c * ga + d * gc, c * gb + d * gd
            cols.append(target.general_symbol(x12, x22, x11, x21))
        if not cols:
            return np.zeros((target.dim, 0), dtype=np.int64)
        return np.array(cols, dtype=np.int64).T % self.p

    # ---------------------------------------------------------- boundary

    @cached_property
    def boundary_matrix(self) -> np.ndarray:
        """Boundary map to the (sign-twisted) cusp module, one column per generator."""
        N, p, sign = self.N, self.p, self.sign
        reps: list[tuple[int, int]] = []
        dead: list[bool] = []

        def locate(u: int, v: int) -> tuple[int, int]:
            cusp = _reduce_cusp(u, v)
            neg = _reduce_cusp(-cusp[0], cusp[1])
            for i, r in enumerate(reps):
                if cusps_equivalent(cusp, r, N):
                    return i, 1
                if sign and cusps_equivalent(neg, r, N):
                    return i, sign
            reps.append(cusp)
            dead.append(sign == -1 and cusps_equivalent(cusp, neg, N))
            return len(reps) - 1, 1

        entries = []
        for j, (a, b, c, d) in enumerate(self.lifts()):
            i1, s1 = locate(a, c)
            i0, s0 = locate(b, d)
            entries.append((j, i1, s1, i0, s0))
        bmat = np.zeros((len(reps), self.dim), dtype=np.int64)
        for j, i1, s1, i0, s0 in entries:
            bmat[i1, j] += s1
            bmat[i0, j] -= s0
        keep = [i for i in range(len(reps)) if not dead[i]]
        self.cusps = [reps[i] for i in keep]
        return bmat[keep] % p

    # ------------------------------------------------------------- misc

    def __repr__(self):
        return f"ManinSpace(N={self.N}, p={self.p}, sign={self.sign}, dim={self.dim})"


def _sparse_quotient(ncols: int, rows: list[dict[int, int]], p: int):
    """Quotient of F_p^ncols by the span of sparse ``rows``.

    Returns (free columns, expr) where expr[c] expresses every pivot column
    c as a dict over free columns.  Rows are eliminated leaves-first along a
    breadth-first order of the row/column incidence graph, which keeps the
    substituted expressions short.
    """
    order = _leaves_first(ncols, rows)
    expr: dict[int, dict[int, int]] = {}
    users: dict[int, set[int]] = {}  # free column -> pivots whose expr mentions it
    for ri in order:
        row: dict[int, int] = {}
        for col, a in rows[ri].items():
            if col in expr:
                for f, b in expr[col].items():
                    row[f] = (row.get(f, 0) + a * b) % p
            else:
                row[col] = (row.get(col, 0) + a) % p
        row = {k: v for k, v in row.items() if v}
        if not row:
            continue
        piv = min(row, key=lambda k: (len(users.get(k, ())), k))
        inv = pow(row.pop(piv), -1, p)
        new = {k: (-v * inv) % p for k, v in row.items()}
        # substitute the new pivot into older expressions
        for q in users.pop(piv, set()):
            e = expr[q]
            a = e.pop(piv)
            for f, b in new.items():
                v = (e.get(f, 0) + a * b) % p
                if v:
                    e[f] = v
                    users.setdefault(f, set()).add(q)
                else:
                    e.pop(f, None)
                    s = users.get(f)
                    if s is not None:
                        s.discard(q)
        expr[piv] = new
        for f in new:
            users.setdefault(f, set()).add(piv)
    free = [c for c in range(ncols) if c not in expr]
    return free, expr


def _leaves_first(ncols: int, rows: list[dict[int, int]]) -> list[int]:
    by_col: list[list[int]] = [[] for _ in range(ncols)]
    for ri, row in enumerate(rows):
        for c in row:
            by_col[c].append(ri)
    seen = [False] * len(rows)
    order: list[int] = []
    for root in range(len(rows)):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        comp = []
        while queue:
            r = queue.popleft()
            comp.append(r)
            for c in rows[r]:
                for r2 in by_col[c]:
                    if not seen[r2]:
                        seen[r2] = True
                        queue.append(r2)
        order.extend(reversed(comp))
    return order


@lru_cache(maxsize=48)
def manin_space(N: int, p: int, sign: int = 0) -> ManinSpace:
    """Cached :class:`ManinSpace` constructor."""
    return ManinSpace(N, p, sign)


def cuspidal_plus(space: ManinSpace) -> Subspace:
    """Cuspidal subspace intersected with the +1 eigenspace of star."""
    return _cuspidal_plus(space)


def _cuspidal_plus(space: ManinSpace) -> Subspace:
    cached = getattr(space, "_cusp_plus", None)
    if cached is not None:
        return cached
    p = space.p
    cusp = Subspace(kernel_basis(space.boundary_matrix, p), p, space.dim, reduced=True)
    if space.sign == 0 and cusp.dim:
        s = space.star_matrix.a
        plus = kernel(FpMatrix(s - np.eye(space.dim, dtype=np.int64), p))
        cusp = intersect(cusp, plus)
    elif space.sign == -1:
        raise ValueError("the plus part of a sign -1 space is zero by construction")
    space._cusp_plus = cusp
    return cusp
