"""Exact arithmetic over prime fields.

Elements, dense polynomials, dense matrices, subspaces and characteristic
polynomials.  Matrices are numpy ``int64`` arrays of residues in ``[0, p)``;
vectors are columns and operators act on the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg.blas import dger as _dger

from .arith import is_prime

P_MAX = 2**31
_FLOAT_EXACT = 2**53
_INT_EXACT = 2**62


class ModulusError(ValueError):
    """Invalid modulus, or operands living over different prime fields."""


def _check_modulus(p: int) -> int:
    p = int(p)
    if p < 3 or p >= P_MAX or not is_prime(p):
        raise ModulusError(f"modulus must be an odd prime below 2**31, got {p}")
    return p


@dataclass(frozen=True)
class FpElement:
    value: int
    p: int

    def __post_init__(self):
        _check_modulus(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ModulusError(f"F_{self.p} vs F_{other.p}")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FpElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElement(self._coerce(other), self.p).inverse()

    def __int__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def _strip(coeffs: Iterable[int], p: int) -> tuple[int, ...]:
    c = [int(a) % p for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class FpPoly:
    """Dense polynomial over F_p, coefficients lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        _check_modulus(self.p)
        object.__setattr__(self, "coeffs", _strip(self.coeffs, self.p))

    @classmethod
    def x(cls, p: int) -> "FpPoly":
        return cls((0, 1), p)

    @classmethod
    def one(cls, p: int) -> "FpPoly":
        return cls((1,), p)

    @classmethod
    def from_roots(cls, roots: Iterable[int], p: int) -> "FpPoly":
        f = cls.one(p)
        for r in roots:
            f = f * cls((-int(r), 1), p)
        return f

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same_field(self, other: "FpPoly"):
        if other.p != self.p:
            raise ModulusError(f"F_{self.p}[x] vs F_{other.p}[x]")

    def __add__(self, other: "FpPoly") -> "FpPoly":
        self._same_field(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FpPoly(tuple(x + y for x, y in zip(a, b)), self.p)

    def __neg__(self) -> "FpPoly":
        return FpPoly(tuple(-a for a in self.coeffs), self.p)

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        return self + (-other)

    def __mul__(self, other) -> "FpPoly":
        if isinstance(other, (int, FpElement)):
            k = int(other)
            return FpPoly(tuple(a * k for a in self.coeffs), self.p)
        self._same_field(other)
        if self.is_zero() or other.is_zero():
            return FpPoly((), self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FpPoly(tuple(out), self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FpPoly":
        out = FpPoly.one(self.p)
        for _ in range(e):
            out = out * self
        return out

    def __divmod__(self, other: "FpPoly") -> tuple["FpPoly", "FpPoly"]:
        self._same_field(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.p
        r = list(self.coeffs)
        d = other.degree
        inv_lead = pow(other.coeffs[-1], -1, p)
        q = [0] * max(len(r) - d, 0)
        for k in range(len(r) - 1, d - 1, -1):
            c = r[k] * inv_lead % p
            if c:
                q[k - d] = c
                for j, b in enumerate(other.coeffs):
                    r[k - d + j] = (r[k - d + j] - c * b) % p
        return FpPoly(tuple(q), p), FpPoly(tuple(r[:d]), p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "FpPoly") -> bool:
        return (other % self).is_zero()

    def derivative(self) -> "FpPoly":
        return FpPoly(tuple(i * a for i, a in enumerate(self.coeffs) if i), self.p)

    def monic(self) -> "FpPoly":
        if self.is_zero():
            return self
        return self * pow(self.coeffs[-1], -1, self.p)

    def __call__(self, a) -> int:
        return poly_eval(self, a).value

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    @classmethod
    def from_list(cls, coeffs: Sequence[int], p: int) -> "FpPoly":
        return cls(tuple(coeffs), p)

    def __repr__(self):
        if self.is_zero():
            return f"0 (mod {self.p})"
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(a) if (a != 1 or i == 0) else ""
            terms.append(f"{coef}{'*' if coef and mono else ''}{mono}")
        return " + ".join(terms) + f" (mod {self.p})"


def poly_eval(f: FpPoly, a) -> FpElement:
    """Horner evaluation of ``f`` at ``a``."""
    if isinstance(a, FpElement):
        if a.p != f.p:
            raise ModulusError(f"evaluating F_{f.p}[x] at an element of F_{a.p}")
        a = a.value
    p = f.p
    acc = 0
    for c in reversed(f.coeffs):
        acc = (acc * a + c) % p
    return FpElement(acc, p)


def _nonzero(f: FpPoly):
    if f.is_zero():
        raise ValueError("zero polynomial has every element as a root")


def _rational_roots(f: FpPoly) -> list[int]:
    p = f.p
    if p <= 1 << 16:
        xs = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for c in reversed(f.coeffs):
            acc = (acc * xs + c) % p
        return [int(a) for a in np.nonzero(acc == 0)[0]]
    # large fields: x^p - x split off by gcd would be needed; keep it simple
    return [a for a in range(p) if f(a) == 0]


def root_multiplicities(f: FpPoly) -> dict[int, int]:
    """Exact multiplicity of every F_p-rational root, by repeated division."""
    _nonzero(f)
    out = {}
    for a in _rational_roots(f):
        lin = FpPoly((-a, 1), f.p)
        g, k = f, 0
        while True:
            q, r = divmod(g, lin)
            if not r.is_zero():
                break
            g, k = q, k + 1
        out[a] = k
    return out


def simple_roots(f: FpPoly) -> set[int]:
    """Roots ``a`` with ``f(a) = 0`` and ``f'(a) != 0``."""
    _nonzero(f)
    df = f.derivative()
    return {a for a in _rational_roots(f) if df(a) != 0}


# ---------------------------------------------------------------- matrices


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of residue matrices modulo ``p`` without overflow."""
    k = a.shape[-1]
    bound = (p - 1) ** 2 * max(k, 1)
    if bound < _FLOAT_EXACT:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    if bound < _INT_EXACT:
        return (a @ b) % p
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


class FpMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int):
        p = _check_modulus(p)
        a = np.array(entries, dtype=np.int64, copy=True)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        a %= p
        a.setflags(write=False)
        self.a = a
        self.p = p

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def _same_field(self, other: "FpMatrix"):
        if other.p != self.p:
            raise ModulusError(f"F_{self.p} vs F_{other.p}")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return FpMatrix(matmul_mod(self.a, other.a, self.p), self.p)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        return FpMatrix(self.a + other.a, self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._same_field(other)
        return FpMatrix(self.a - other.a, self.p)

    def __mul__(self, k: int) -> "FpMatrix":
        return FpMatrix(self.a * (int(k) % self.p), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpMatrix(-self.a, self.p)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.p, self.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.a.T, self.p)

    T = property(transpose)

    def __repr__(self):
        return f"FpMatrix({self.rows}x{self.cols} over F_{self.p})"


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with first-nonzero pivoting."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return a[:0], []
    if (p - 1) ** 2 * (min(rows, cols) + 2) * p < _FLOAT_EXACT:
        return _rref_float(a, p)
    return _rref_int(a, p)


def _rref_int(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            if (p - 1) ** 2 < _INT_EXACT:
                a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
            else:
                a[hit] = ((a[hit].astype(object) - np.outer(col[hit], a[r]).astype(object)) % p).astype(np.int64)
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _rref_float(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    # Entries are reduced lazily: only the pivot column and pivot row are
    # brought back to [0, p) before use; every other entry drifts by less
    # than p^2 per step, which the caller's bound keeps exact in float64.
    w = np.asfortranarray(a, dtype=np.float64)
    rows, cols = w.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = np.mod(w[:, c], p)
        w[:, c] = col
        nz = np.flatnonzero(col[r:])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            w[[r, i]] = w[[i, r]]
            col[[r, i]] = col[[i, r]]
        inv = pow(int(col[r]), -1, p)
        row = np.mod(np.mod(w[r, c:], p) * inv, p)
        w[r, c:] = row
        col[r] = 0.0
        if col.any():
            _dger(-1.0, col, row, a=w[:, c:], overwrite_a=True)
        w[:, c] = 0.0
        w[r, c] = 1.0
        pivots.append(c)
        r += 1
    return np.mod(w[:r], p).astype(np.int64), pivots


def rank(m: FpMatrix) -> int:
    return len(rref(m.a, m.p)[1])


class Subspace:
    """Subspace of F_p^n held by a basis in reduced row echelon form."""

    __slots__ = ("ambient_dim", "basis", "pivots", "p")

    def __init__(self, basis: np.ndarray, p: int, ambient_dim: int | None = None, *, reduced: bool = False):
        p = _check_modulus(p)
        basis = np.array(basis, dtype=np.int64)
        if basis.ndim == 1:
            basis = basis.reshape(0 if basis.size == 0 else 1, -1)
        if ambient_dim is None:
            ambient_dim = basis.shape[1]
        basis = basis.reshape(-1, ambient_dim) % p if ambient_dim else np.zeros((0, 0), dtype=np.int64)
        if reduced:
            piv = _pivots_of_rref(basis)
        else:
            basis, piv = rref(basis, p)
        basis.setflags(write=False)
        self.ambient_dim = int(ambient_dim)
        self.basis = basis
        self.pivots = tuple(piv)
        self.p = p

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(np.eye(n, dtype=np.int64), p, n, reduced=True)

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(np.zeros((0, n), dtype=np.int64), p, n, reduced=True)

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int) -> "Subspace":
        return cls(np.array(vectors, dtype=np.int64).reshape(-1, ambient_dim), p, ambient_dim)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def basis_matrix(self) -> FpMatrix:
        return FpMatrix(self.basis, self.p)

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates (as columns) of column vectors lying in the subspace."""
        v = np.asarray(vectors, dtype=np.int64) % self.p
        coords = v[list(self.pivots)]
        back = matmul_mod(self.basis.T, coords, self.p)
        if not np.array_equal(back, v):
            raise ValueError("vector does not lie in the subspace")
        return coords

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1, 1) % self.p
        return bool(np.array_equal(matmul_mod(self.basis.T, v[list(self.pivots)], self.p), v))

    def is_subspace_of(self, other: "Subspace") -> bool:
        if self.dim == 0:
            return True
        v = self.basis.T
        return bool(np.array_equal(matmul_mod(other.basis.T, v[list(other.pivots)], self.p), v))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.ambient_dim, self.pivots) == (other.p, other.ambient_dim, other.pivots) and bool(
            np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim {self.dim} in F_{self.p}^{self.ambient_dim})"


def _pivots_of_rref(b: np.ndarray) -> list[int]:
    piv = []
    for row in b:
        nz = np.flatnonzero(row)
        piv.append(int(nz[0]))
    return piv


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : a x = 0}, already in reduced echelon form."""
    rows, cols = a.shape
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    k = np.zeros((len(free), cols), dtype=np.int64)
    if not free:
        return k
    k[np.arange(len(free)), free] = 1
    if piv:
        k[:, piv] = (-r[:, free]).T % p
    return rref(k, p)[0]


def kernel(m: FpMatrix) -> Subspace:
    """Right kernel {x : M x = 0}."""
    return Subspace(kernel_basis(m.a, m.p), m.p, m.cols, reduced=True)


def image(m: FpMatrix) -> Subspace:
    """Column space of ``m``."""
    return Subspace(m.a.T, m.p, m.rows)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.p != b.p:
        raise ModulusError(f"F_{a.p} vs F_{b.p}")
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("subspaces of different ambient spaces")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim, a.p)
    p = a.p
    stacked = np.concatenate([a.basis, (-b.basis) % p]).T
    rel = kernel_basis(stacked, p)
    if rel.shape[0] == 0:
        return Subspace.zero(a.ambient_dim, p)
    return Subspace(matmul_mod(rel[:, : a.dim], a.basis, p), p, a.ambient_dim)


def restrict(m: FpMatrix, v: Subspace) -> FpMatrix:
    """Matrix of ``m`` on ``v`` in the coordinates of ``v``'s basis.

    Raises ``ValueError`` if ``v`` is not ``m``-invariant.
    """
    if m.p != v.p:
        raise ModulusError(f"F_{m.p} vs F_{v.p}")
    if not m.is_square() or m.rows != v.ambient_dim:
        raise ValueError("operator and subspace dimensions disagree")
    if v.dim == 0:
        return FpMatrix.zeros(0, 0, m.p)
    images = matmul_mod(m.a, v.basis.T, m.p)
    try:
        coords = v.coordinates(images)
    except ValueError:
        raise ValueError("subspace is not invariant under the operator") from None
    return FpMatrix(coords, m.p)


# ---------------------------------------------------------- char polys


def _matvec_mod(a: np.ndarray, x: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0:
        return np.zeros(a.shape[0], dtype=np.int64)
    return matmul_mod(a, x.reshape(-1, 1), p).ravel()


def hessenberg(m: FpMatrix) -> np.ndarray:
    """Upper Hessenberg matrix similar to ``m``."""
    p = m.p
    n = m.rows
    if n > 2 and n * n * p**3 < _FLOAT_EXACT:
        return _hessenberg_float(np.array(m.a, dtype=np.float64), p)
    h = np.array(m.a, dtype=np.int64)
    for k in range(1, n - 1):
        col = h[k:, k - 1]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        i = k + int(nz[0])
        if i != k:
            h[[k, i]] = h[[i, k]]
            h[:, [k, i]] = h[:, [i, k]]
        inv = pow(int(h[k, k - 1]), -1, p)
        u = h[k + 1 :, k - 1] * inv % p
        hit = np.flatnonzero(u)
        if hit.size == 0:
            continue
        rows = hit + k + 1
        uh = u[hit]
        h[rows] = np.array(
            [[(x - int(c) * int(y)) % p for x, y in zip(hr, h[k])] for hr, c in zip(h[rows], uh)], dtype=np.int64
        ) if (p - 1) ** 2 >= _INT_EXACT else (h[rows] - np.outer(uh, h[k])) % p
        h[:, k] = (h[:, k] + _matvec_mod(h[:, rows], uh, p)) % p
    return h


def _hessenberg_float(h: np.ndarray, p: int) -> np.ndarray:
    # Same lazy-reduction scheme as _rref_float; column k is reduced right
    # after its update, so column sums stay below n^2 p^3.
    n = h.shape[0]
    for k in range(1, n - 1):
        col = np.mod(h[k:, k - 1], p)
        h[k:, k - 1] = col
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        i = k + int(nz[0])
        if i != k:
            h[[k, i]] = h[[i, k]]
            h[:, [k, i]] = h[:, [i, k]]
            col[[0, i - k]] = col[[i - k, 0]]
        h[k] = np.mod(h[k], p)
        inv = pow(int(col[0]), -1, p)
        u = np.mod(col[1:] * inv, p)
        if not u.any():
            continue
        _dger(-1.0, h[k], u, a=h[k + 1 :].T, overwrite_a=True)
        h[k + 1 :, k - 1] = 0.0
        h[:, k] = np.mod(h[:, k] + h[:, k + 1 :] @ u, p)
    return np.mod(h, p).astype(np.int64)


def charpoly(m: FpMatrix) -> FpPoly:
    """Characteristic polynomial det(x I - M) via Hessenberg reduction."""
    if not m.is_square():
        raise ValueError(f"charpoly needs a square matrix, got {m.shape}")
    p = m.p
    n = m.rows
    h = hessenberg(m)
    # polys[k] holds the char poly of the leading k x k block; prods[i]
    # holds the product of subdiagonal entries h[i+1, i] ... h[k-1, k-2]
    exact = (p - 1) ** 2 * (n + 1) < _FLOAT_EXACT
    dt = np.float64 if exact else object
    hh = h.astype(dt)
    polys = np.zeros((n + 1, n + 1), dtype=dt)
    polys[0, 0] = 1
    prods = np.zeros(n, dtype=dt)
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = np.zeros(n + 1, dtype=dt)
        cur[1:] = prev[:-1]
        cur = cur - hh[k - 1, k - 1] * prev
        if k > 1:
            prods[: k - 2] = prods[: k - 2] * hh[k - 1, k - 2] % p
            prods[k - 2] = hh[k - 1, k - 2]
            coef = hh[: k - 1, k - 1] * prods[: k - 1] % p
            cur = cur - coef @ polys[: k - 1]
        polys[k] = cur % p
    return FpPoly(tuple(int(c) for c in polys[n]), p)


def companion(f: FpPoly) -> FpMatrix:
    """Companion matrix of a monic polynomial (char poly equals ``f``)."""
    if f.is_zero() or f.coeffs[-1] != 1:
        raise ValueError("companion matrix needs a monic polynomial")
    n = f.degree
    c = np.zeros((n, n), dtype=np.int64)
    if n:
        c[1:, :-1] = np.eye(n - 1, dtype=np.int64)
        c[:, -1] = [-a for a in f.coeffs[:-1]]
    return FpMatrix(c, f.p)


def poly_of_matrix(f: FpPoly, m: FpMatrix) -> FpMatrix:
    """Evaluate ``f`` at the square matrix ``m`` by Horner's rule."""
    n = m.rows
    acc = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (matmul_mod(acc, m.a, m.p) + c * eye) % m.p
    return FpMatrix(acc, m.p)


def det(m: FpMatrix) -> int:
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    p = m.p
    a = np.array(m.a, dtype=np.int64)
    n = a.shape[0]
    d = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            a[[c, i]] = a[[i, c]]
            d = -d
        piv = int(a[c, c])
        d = d * piv % p
        inv = pow(piv, -1, p)
        f = a[c + 1 :, c] * inv % p
        a[c + 1 :] = (a[c + 1 :] - np.outer(f, a[c])) % p
    return d % p
