import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locmod.ffcore import (
    FpElement, FpMatrix, FpPoly, ModulusError, Subspace, _rref_float, _rref_int, charpoly, companion,
    det, image, intersect, kernel, poly_eval, poly_of_matrix, rank, restrict, root_multiplicities, rref,
    simple_roots,
)

from oracles import det_leibniz

PRIMES = [5, 7, 101, 2**31 - 1]


def test_element_arithmetic():
    a = FpElement(3, 7)
    assert a + 5 == 1
    assert a * a == 2
    assert a.inverse() * a == 1
    assert -a == 4
    with pytest.raises(ZeroDivisionError):
        FpElement(0, 7).inverse()


def test_modulus_checks():
    with pytest.raises(ModulusError):
        FpPoly((1,), 9)
    with pytest.raises(ModulusError):
        FpPoly((1,), 2**31 + 11)
    with pytest.raises(ModulusError):
        poly_eval(FpPoly((1, 1), 5), FpElement(1, 7))
    with pytest.raises(ModulusError):
        FpMatrix([[1]], 5) @ FpMatrix([[1]], 7)


def test_poly_basics():
    p = 101
    f = FpPoly.from_roots([3, 7, 7], p)
    assert f.degree == 3
    assert FpPoly((), p).degree == -1
    assert root_multiplicities(f) == {3: 1, 7: 2}
    assert simple_roots(f) == {3}
    q, r = divmod(f, FpPoly.from_roots([7], p))
    assert r.is_zero() and q == FpPoly.from_roots([3, 7], p)
    assert FpPoly.from_roots([7], p).divides(f)
    with pytest.raises(ValueError):
        simple_roots(FpPoly((), p))


def test_charpoly_examples():
    p = 101
    assert charpoly(FpMatrix([[2, 0], [0, 3]], p)) == FpPoly.from_roots([2, 3], p)
    assert charpoly(FpMatrix.zeros(0, 0, p)) == FpPoly.one(p)
    f = FpPoly((5, 0, 3, 1), p)
    assert charpoly(companion(f)) == f


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 5), st.data())
def test_charpoly_matches_leibniz(p, n, data):
    rows = [[data.draw(st.integers(0, p - 1)) for _ in range(n)] for _ in range(n)]
    f = charpoly(FpMatrix(rows, p))
    assert f.degree == n and f.coeffs[-1] == 1
    for x in data.draw(st.lists(st.integers(0, p - 1), min_size=1, max_size=3)):
        xi = [[((x if i == j else 0) - rows[i][j]) % p for j in range(n)] for i in range(n)]
        assert f(x) == det_leibniz(xi, p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_cayley_hamilton(p, n, seed):
    rng = np.random.default_rng(seed)
    m = FpMatrix(rng.integers(0, p, size=(n, n)), p)
    assert poly_of_matrix(charpoly(m), m).is_zero()
    assert charpoly(m).coeffs[0] == (-1) ** n * det(m) % p


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([5, 7, 101]), st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_rref_paths_agree_and_kernel(p, r, c, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(r, c))
    if seed % 3 == 0:
        a[:, 0] = 0
    ri, pi = _rref_int(a.copy(), p)
    rf, pf = _rref_float(a.copy(), p)
    assert pi == pf and np.array_equal(ri, rf)
    k = kernel(FpMatrix(a, p))
    assert k.dim + len(pi) == c
    assert not (a @ k.basis.T % p).any()
    assert rank(FpMatrix(a, p)) == len(pi)
    again, _ = rref(ri, p)
    assert np.array_equal(again, ri)


def test_subspace_operations():
    p = 7
    V = Subspace([[1, 0, 0], [0, 1, 0]], p)
    W = Subspace([[0, 1, 0], [0, 0, 1]], p)
    X = intersect(V, W)
    assert X.dim == 1 and X.contains([0, 3, 0])
    assert X.is_subspace_of(V) and not V.is_subspace_of(W)
    m = FpMatrix([[1, 2, 0], [3, 4, 0], [0, 0, 5]], p)
    assert restrict(m, V) == FpMatrix([[1, 2], [3, 4]], p)
    with pytest.raises(ValueError, match="not invariant"):
        restrict(FpMatrix([[0, 0, 1], [0, 0, 0], [1, 0, 0]], p), V)
    assert image(m).dim == 3
    assert Subspace.zero(3, p).dim == 0 and Subspace.full(3, p).dim == 3


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([5, 101]), st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_det_multiplicative(p, n, seed):
    rng = np.random.default_rng(seed)
    a = FpMatrix(rng.integers(0, p, size=(n, n)), p)
    b = FpMatrix(rng.integers(0, p, size=(n, n)), p)
    assert det(a @ b) == det(a) * det(b) % p
