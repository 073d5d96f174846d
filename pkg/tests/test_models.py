import itertools
from collections import Counter
from fractions import Fraction
from math import exp

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locmod.models import (
    Distribution, SimConfig, expected_vanishing, fixed_points_batch, fixed_points_sample, poisson_cdf,
    poisson_discrepancy, poisson_pmf, simulate_locally_modular_counts,
)


def rng(seed=0):
    return np.random.Generator(np.random.Philox(seed))


def test_fixed_points_trivial_cases():
    g = rng()
    assert all(fixed_points_sample(1, g) == 1 for _ in range(10))
    vals = [fixed_points_sample(2, g) for _ in range(4000)]
    assert set(vals) <= {0, 2}
    assert abs(vals.count(2) / len(vals) - 0.5) < 0.05
    with pytest.raises(ValueError):
        fixed_points_sample(0, g)


def test_fixed_point_law_on_s4():
    exact = Counter(sum(1 for i, x in enumerate(perm) if i == x) for perm in itertools.permutations(range(4)))
    assert [exact[k] for k in range(5)] == [9, 8, 6, 0, 1]
    draws = fixed_points_batch(4, 240_000, rng(3))
    freq = np.bincount(draws, minlength=5) / draws.size
    assert np.allclose(freq, np.array([9, 8, 6, 0, 1]) / 24, atol=0.005)


def test_sample_mean_is_one():
    draws = fixed_points_batch(100, 100_000, rng(1))
    assert abs(draws.mean() - 1) < 0.02


def test_poisson_reference():
    assert abs(poisson_pmf(1, 0) - exp(-1)) < 1e-15
    assert abs(poisson_pmf(2, 0) - 0.135335283) < 1e-9
    assert abs(poisson_cdf(1, 60) - 1) < 1e-12
    with pytest.raises(ValueError):
        poisson_pmf(0, 1)


def test_discrepancy_examples():
    assert abs(poisson_discrepancy(Distribution({0: 10}), 1.0) - (1 - exp(-1))) < 1e-12
    scale = 10**15
    d = Distribution({k: round(poisson_pmf(1, k) * scale) for k in range(30)})
    assert poisson_discrepancy(d, 1.0) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.integers(0, 20), st.integers(1, 50), min_size=1), st.floats(0.1, 10))
def test_discrepancy_is_a_probability(counts, lam):
    d = Distribution(counts)
    assert 0 <= poisson_discrepancy(d, lam) <= 1
    cdf = [d.cdf(k) for k in range(22)]
    assert all(a <= b for a, b in zip(cdf, cdf[1:])) and abs(cdf[-1] - 1) < 1e-12


def test_simulation_reproducible_and_worker_independent():
    cfg = SimConfig(s=1, e=50, trials=5000, seed=7, chunk=1000)
    a = simulate_locally_modular_counts(cfg)
    b = simulate_locally_modular_counts(SimConfig(s=1, e=50, trials=5000, seed=7, chunk=1000, workers=2))
    assert a.dist.counts == b.dist.counts
    c = simulate_locally_modular_counts(SimConfig(s=1, e=50, trials=5000, seed=8, chunk=1000))
    assert c.dist.counts != a.dist.counts


def test_simulation_s3_moments():
    r = simulate_locally_modular_counts(SimConfig(s=3, e=200, trials=20_000, seed=1))
    assert abs(r.dist.mean() - 8) < 0.1
    assert abs(r.dist.variance() - 8) < 0.4


def test_discrepancy_shrinks_with_e():
    # the exact distance to Poisson(1) is about 1e-2 at e=5 and under 1e-5 for
    # e >= 10, so past e=10 the averages agree up to Monte-Carlo noise (~3e-3)
    avg = {}
    for e in (5, 10, 1000):
        ds = [simulate_locally_modular_counts(SimConfig(s=0, e=e, trials=5000, seed=s)).discrepancy for s in range(20)]
        avg[e] = sum(ds) / len(ds)
    assert avg[5] > avg[10] and avg[5] > avg[1000]
    assert avg[1000] <= avg[10] + 0.003


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(s=1, e=(3,))
    with pytest.raises(ValueError):
        SimConfig(s=0, trials=0)
    assert SimConfig(s=2, e=7).e == (7, 7, 7, 7)


def test_expected_vanishing():
    assert expected_vanishing(3, 3, 1) == Fraction(13, 27) == expected_vanishing(3, 3, 1, brute_force=True)
    assert expected_vanishing(3, 3, 0) == 0
    for p in (5, 7, 101):
        assert abs(expected_vanishing(p, 40, 1) - Fraction(1, p - 1)) < Fraction(1, p**40)
    with pytest.raises(ValueError):
        expected_vanishing(3, 20, 1, brute_force=True)


@pytest.mark.parametrize("p,d,n", [(p, d, n) for p in (2, 3) for d in range(1, 6) for n in range(0, 3)])
def test_expected_vanishing_brute_force(p, d, n):
    assert expected_vanishing(p, d, n) == expected_vanishing(p, d, n, brute_force=True)
