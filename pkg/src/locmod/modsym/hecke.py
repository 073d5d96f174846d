"""Hecke operators, Atkin-Lehner involutions, degeneracy maps and newforms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..arith import is_prime, is_squarefree, prime_divisors
from ..ffcore import FpMatrix, Subspace, kernel_basis, matmul_mod, restrict
from .manin import ManinSpace, _cuspidal_plus, manin_space


@lru_cache(maxsize=64)
def heilbronn_merel(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """Matrices [a b; c d] with ad - bc = n, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, n + 1):
        for d in range(1, n + 1):
            for b in range(a):
                # ad - bc = n  =>  c = (ad - n) / b
                if b == 0:
                    if a * d == n:
                        out.extend((a, 0, c, d) for c in range(d))
                    continue
                num = a * d - n
                if num < 0 or num % b:
                    continue
                c = num // b
                if c < d:
                    out.append((a, b, c, d))
    return tuple(sorted(set(out)))


def _space_cache(space: ManinSpace) -> dict:
    cache = getattr(space, "_ops", None)
    if cache is None:
        cache = space._ops = {}
    return cache


def hecke_ambient(space: ManinSpace, q: int) -> FpMatrix:
    """T_q on the whole presented space (q prime, q not dividing N p)."""
    if not is_prime(q):
        raise ValueError(f"T_q needs a prime index, got {q}")
    if space.N % q == 0 or q == space.p:
        raise ValueError(f"q={q} divides N*p = {space.N}*{space.p}")
    cache = _space_cache(space)
    key = ("T", q)
    if key not in cache:
        images = [space.right_action(h) for h in heilbronn_merel(q)]
        cache[key] = FpMatrix(space.pairs_matrix(images), space.p)
    return cache[key]


def hecke_T(space: ManinSpace, V: Subspace | None, q: int) -> FpMatrix:
    """Matrix of T_q on the invariant subspace ``V`` (default: cuspidal plus)."""
    if V is None:
        V = _cuspidal_plus(space)
    return restrict(hecke_ambient(space, q), V)


def atkin_lehner_matrix(N: int, Q: int) -> tuple[int, int, int, int]:
    """Integral (Qa, b; N, Q) of determinant Q, a the least residue >= 0."""
    if Q < 1 or N % Q or np.gcd(Q, N // Q) != 1:
        raise ValueError(f"{Q} is not an exact divisor of {N}")
    R = N // Q
    a = pow(Q, -1, R) if R > 1 else 0
    b = (Q * a - 1) // R
    return Q * a, b, N, Q


def atkin_lehner_ambient(space: ManinSpace, Q: int) -> FpMatrix:
    cache = _space_cache(space)
    key = ("W", Q)
    if key not in cache:
        m = atkin_lehner_matrix(space.N, Q)
        w = FpMatrix(space.matrix_action(m), space.p)
        cache[key] = w
    return cache[key]


def atkin_lehner(space: ManinSpace, V: Subspace | None, Q: int) -> FpMatrix:
    """Involution w_Q on the invariant subspace ``V`` (default: cuspidal plus).

    For weight 2 the integral matrix squares to Q times an element of
    Gamma_0(N), so no rescaling is needed; the square is checked.
    """
    if V is None:
        V = _cuspidal_plus(space)
    w = restrict(atkin_lehner_ambient(space, Q), V)
    if not (w @ w == FpMatrix.identity(V.dim, space.p)):
        raise ArithmeticError(f"w_{Q} does not square to the identity at level {space.N}")
    return w


def degeneracy_matrix(space: ManinSpace, M: int, t: int) -> np.ndarray:
    """Map {a, b} -> {t a, t b} from level N to level M (t M divides N)."""
    N = space.N
    if N % (M * t):
        raise ValueError(f"t*M = {t}*{M} does not divide N = {N}")
    cache = _space_cache(space)
    key = ("deg", M, t)
    if key not in cache:
        target = manin_space(M, space.p, space.sign)
        if t == 1:
            c, d = space.generator_pairs()
            idx = target.p1.lookup(c % M, d % M)
            cols = target._proj[idx].toarray().T % space.p
        else:
            cols = space.matrix_action((t, 0, 0, 1), target)
        cache[key] = cols
    return cache[key]


def new_subspace_of(space: ManinSpace) -> Subspace:
    """Common kernel, inside cuspidal plus, of both degeneracy maps to each N/l."""
    cache = _space_cache(space)
    if "new" in cache:
        return cache["new"]
    p = space.p
    V = _cuspidal_plus(space)
    blocks = []
    for ell in prime_divisors(space.N):
        M = space.N // ell
        for t in (1, ell):
            blocks.append(matmul_mod(degeneracy_matrix(space, M, t), V.basis.T, p))
    if V.dim == 0 or not blocks:
        new = V
    else:
        coeffs = kernel_basis(np.concatenate(blocks), p)
        new = Subspace(matmul_mod(coeffs, V.basis, p), p, space.dim) if coeffs.shape[0] else Subspace.zero(space.dim, p)
    cache["new"] = new
    return new


def new_subspace(N: int, p: int, sign: int = 1) -> Subspace:
    return new_subspace_of(manin_space(N, p, sign))


@dataclass
class ALDecomposition:
    N: int
    p: int
    primes: tuple[int, ...]
    pieces: dict[tuple[int, ...], Subspace] = field(default_factory=dict)

    @property
    def dims(self) -> dict[tuple[int, ...], int]:
        return {chi: V.dim for chi, V in self.pieces.items()}

    @staticmethod
    def label(chi: tuple[int, ...]) -> str:
        return "".join("+" if e == 1 else "-" for e in chi)


def al_decomposition_of(space: ManinSpace) -> ALDecomposition:
    N, p = space.N, space.p
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not squarefree")
    cache = _space_cache(space)
    if "al" in cache:
        return cache["al"]
    new = new_subspace_of(space)
    primes = tuple(prime_divisors(N))
    dec = ALDecomposition(N, p, primes)
    ws = [atkin_lehner(space, new, ell).a for ell in primes]
    eye = np.eye(new.dim, dtype=np.int64)
    for chi in itertools.product((1, -1), repeat=len(primes)):
        if new.dim == 0:
            dec.pieces[chi] = Subspace.zero(space.dim, p)
            continue
        stacked = np.concatenate([(w - e * eye) % p for w, e in zip(ws, chi)]) if ws else np.zeros((0, new.dim), np.int64)
        coeffs = kernel_basis(stacked, p)
        if coeffs.shape[0]:
            dec.pieces[chi] = Subspace(matmul_mod(coeffs, new.basis, p), p, space.dim)
        else:
            dec.pieces[chi] = Subspace.zero(space.dim, p)
    total = sum(dec.dims.values())
    if total != new.dim:
        raise ArithmeticError(f"Atkin-Lehner pieces span {total} of {new.dim} dimensions at level {N}")
    cache["al"] = dec
    return dec


def al_eigenspaces(N: int, p: int, sign: int = 1) -> ALDecomposition:
    """Simultaneous (+-1)^s eigenspace split of the new subspace under w_l, l | N."""
    return al_decomposition_of(manin_space(N, p, sign))
