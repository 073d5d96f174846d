from math import log, pi

import pytest
from hypothesis import given, settings, strategies as st

from locmod.analytic import (
    euler_constant, leading_term, squarefree_omega, sum_2_omega, sum_2_omega_range, tauberian, tauberian_ratio,
)
from locmod.arith import is_squarefree, omega


def test_sieve_examples():
    t = squarefree_omega(1, 100)
    assert t.at(12) == (False, 2)
    assert t.at(30) == (True, 3)
    assert t.at(1) == (True, 0)
    for N in range(1, 101):
        assert t.at(N) == (is_squarefree(N), omega(N))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10**8), st.integers(0, 3000))
def test_sieve_matches_factorization(lo, width):
    t = squarefree_omega(lo, lo + width)
    for N in range(lo, lo + width + 1, max(1, width // 50)):
        assert t.at(N) == (is_squarefree(N), omega(N))


def test_sum_examples():
    assert sum_2_omega(5) == 12
    assert sum_2_omega(1) == 3
    brute = sum(2 ** omega(N) for N in range(1000, 2001) if is_squarefree(N))
    assert sum_2_omega(1000) == brute == 3186


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 10**5), st.integers(0, 100))
def test_sum_additive(X, cut_pct):
    cut = X + (X * cut_pct) // 100
    assert sum_2_omega_range(X, cut) + sum_2_omega_range(cut + 1, 2 * X) == sum_2_omega(X)


def test_euler_constant():
    assert euler_constant(2).value == pytest.approx(0.5, abs=1e-15)
    assert euler_constant(3).value == pytest.approx(10 / 27, abs=1e-15)
    c5, c6 = euler_constant(10**5), euler_constant(10**6)
    assert abs(c5.value - c6.value) < c5.tail_bound
    assert c6.value < c5.value
    assert euler_constant(3).value > 0.3 and c6.value > 0.28


def test_squarefree_density():
    t = squarefree_omega(1, 10**7)
    assert abs(t.squarefree.sum() / 10**7 - 6 / pi**2) < 0.01 * 6 / pi**2


def test_sum_near_leading_term():
    X = 10**6
    c = euler_constant().value
    assert abs(sum_2_omega(X) / (c * leading_term(X)) - 1) < 0.25


def test_ratio_trend():
    r3, r4, r6 = (tauberian_ratio(10**k) for k in (3, 4, 6))
    assert 0.7 <= r4 <= 1.3
    assert abs(r6 - 1) < abs(r3 - 1)
    res = tauberian(10**4).to_json()
    assert set(res) == {"x", "sum", "constant", "ratio", "tail_bound"}
    with pytest.raises(ValueError):
        tauberian(999)


def test_band():
    c = euler_constant().value
    for k in (3, 4, 5, 6):
        X = 10**k
        s = sum_2_omega(X)
        assert c / 2 * X * log(X) <= s <= 2 * c * X * log(X)
