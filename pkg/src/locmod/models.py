"""Random-permutation and random-polynomial models for counts of F_p-points.

The number of F_p-rational Hecke eigensystems is modelled as a sum of
independent fixed-point counts of random permutations, one per Atkin-Lehner
eigenspace; each is approximately Poisson(1).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import exp, lgamma, log

import numpy as np

VANISH_STATE_CAP = 10**6


def fixed_points_sample(e: int, rng: np.random.Generator) -> int:
    """Fixed points of a uniform permutation of ``e`` symbols (Fisher-Yates)."""
    if e < 1:
        raise ValueError(f"need at least one symbol, got {e}")
    perm = list(range(e))
    for i in range(e - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    return sum(1 for i, x in enumerate(perm) if i == x)


def fixed_points_batch(e: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized Fisher-Yates, one permutation per column."""
    if e < 1:
        raise ValueError(f"need at least one symbol, got {e}")
    perm = np.tile(np.arange(e, dtype=np.int32)[:, None], (1, trials))
    flat = perm.ravel()
    cols = np.arange(trials)
    for i in range(e - 1, 0, -1):
        j = rng.integers(0, i + 1, size=trials)
        ii = i * trials + cols
        jj = j * trials + cols
        a = flat[ii]
        flat[ii] = flat[jj]
        flat[jj] = a
    return (perm == np.arange(e)[:, None]).sum(axis=0)


def poisson_pmf(lam: float, k: int) -> float:
    if lam <= 0:
        raise ValueError(f"rate must be positive, got {lam}")
    if k < 0:
        return 0.0
    return exp(-lam + k * log(lam) - lgamma(k + 1))


def poisson_cdf(lam: float, k: int) -> float:
    if lam <= 0:
        raise ValueError(f"rate must be positive, got {lam}")
    if k < 0:
        return 0.0
    term = exp(-lam)
    acc = term
    for i in range(1, k + 1):
        term *= lam / i
        acc += term
        if term < 1e-300 and i > lam:
            break
    return min(acc, 1.0)


@dataclass
class Distribution:
    """Empirical distribution on the nonnegative integers."""

    counts: dict[int, int]

    def __post_init__(self):
        if any(k < 0 or v < 0 for k, v in self.counts.items()):
            raise ValueError("support and frequencies must be nonnegative")
        self.counts = {int(k): int(v) for k, v in sorted(self.counts.items()) if v}

    @classmethod
    def from_values(cls, values) -> "Distribution":
        return cls(Counter(int(v) for v in values))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def pmf(self, k: int) -> float:
        return self.counts.get(k, 0) / self.total

    def cdf(self, k: int) -> float:
        return sum(v for x, v in self.counts.items() if x <= k) / self.total

    def mean(self) -> float:
        n = self.total
        if n == 0:
            raise ValueError("empty distribution")
        return sum(k * v for k, v in self.counts.items()) / n

    def variance(self, ddof: int = 0) -> float:
        n = self.total
        if n - ddof <= 0:
            raise ValueError(f"need more than {ddof} observations")
        m = self.mean()
        return sum(v * (k - m) ** 2 for k, v in self.counts.items()) / (n - ddof)

    def merge(self, other: "Distribution") -> "Distribution":
        c = Counter(self.counts)
        c.update(other.counts)
        return Distribution(dict(c))


def poisson_discrepancy(d: Distribution, lam: float, tail: float = 1e-12) -> float:
    """sup_k |F_d(k) - F_Poisson(lam)(k)| over integer thresholds."""
    if d.total == 0:
        raise ValueError("empty distribution")
    if lam <= 0:
        raise ValueError(f"rate must be positive, got {lam}")
    top = max(d.counts)
    worst, emp, pois = 0.0, 0.0, 0.0
    term = exp(-lam)
    k = 0
    while True:
        emp += d.counts.get(k, 0) / d.total
        pois += term
        worst = max(worst, abs(emp - min(pois, 1.0)))
        if k >= top and (1.0 - pois < tail or term < tail * 1e-3 and k > lam):
            break
        k += 1
        term *= lam / k
    return worst


@dataclass
class SimConfig:
    s: int
    e: int | tuple[int, ...] = 1000
    trials: int = 100_000
    seed: int = 0
    workers: int = 1
    chunk: int = 10_000

    def __post_init__(self):
        if self.s < 0:
            raise ValueError(f"s must be nonnegative, got {self.s}")
        if self.trials < 1:
            raise ValueError("trial count must be at least 1")
        if isinstance(self.e, int):
            self.e = (self.e,) * (2**self.s)
        self.e = tuple(int(x) for x in self.e)
        if len(self.e) != 2**self.s:
            raise ValueError(f"need {2**self.s} eigenspace sizes, got {len(self.e)}")
        if min(self.e) < 1:
            raise ValueError("eigenspace sizes must be at least 1")


@dataclass
class SimResult:
    config: SimConfig
    dist: Distribution
    discrepancy: float = field(init=False)

    def __post_init__(self):
        self.discrepancy = poisson_discrepancy(self.dist, float(2**self.config.s))

    def to_json(self) -> dict:
        return {
            "s": self.config.s,
            "trials": self.config.trials,
            "mean": self.dist.mean(),
            "variance": self.dist.variance(),
            "discrepancy_vs_poisson": self.discrepancy,
            "histogram": {str(k): v for k, v in self.dist.counts.items()},
        }


def _sim_chunk(args) -> dict[int, int]:
    sizes, n, seq = args
    rng = np.random.Generator(np.random.Philox(seq))
    total = np.zeros(n, dtype=np.int64)
    for e in sizes:
        total += fixed_points_batch(e, n, rng)
    return dict(Counter(total.tolist()))


def simulate_locally_modular_counts(config: SimConfig) -> SimResult:
    """Histogram of sums of independent fixed-point counts, one per eigenspace.

    Trials are split into fixed-size chunks, each with its own child seed, so
    the result does not depend on the worker count.
    """
    n_chunks = -(-config.trials // config.chunk)
    seqs = np.random.SeedSequence(config.seed).spawn(n_chunks)
    sizes = [min(config.chunk, config.trials - i * config.chunk) for i in range(n_chunks)]
    jobs = [(config.e, n, sq) for n, sq in zip(sizes, seqs)]
    if config.workers > 1 and n_chunks > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            parts = list(ex.map(_sim_chunk, jobs))
    else:
        parts = [_sim_chunk(j) for j in jobs]
    dist = Distribution({})
    for part in parts:
        dist = dist.merge(Distribution(part))
    return SimResult(config, dist)


def expected_vanishing(p: int, d: int, n: int, brute_force: bool = False) -> Fraction:
    """Expected total vanishing order at ``n`` fixed points of a random monic degree-``d`` polynomial."""
    if d < 0 or n < 0:
        raise ValueError("degree and point count must be nonnegative")
    if n > p:
        raise ValueError(f"only {p} distinct points exist in F_{p}")
    if brute_force:
        return _vanishing_brute_force(p, d, n)
    return n * sum((Fraction(1, p**k) for k in range(1, d + 1)), Fraction(0))


def _order_at(coeffs: list[int], a: int, p: int) -> int:
    """Multiplicity of a as a root of the nonzero polynomial ``coeffs`` (lowest first)."""
    k = 0
    c = list(coeffs)
    while len(c) > 1:
        # synthetic division by (x - a)
        q = [0] * (len(c) - 1)
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = (acc * a + c[i]) % p
            q[i - 1] = acc
        if (acc * a + c[0]) % p:
            break
        c = q
        k += 1
    return k


def _vanishing_brute_force(p: int, d: int, n: int) -> Fraction:
    if p ** (d + 1) > VANISH_STATE_CAP:
        raise ValueError(f"brute force over p^(d+1) = {p ** (d + 1)} states exceeds {VANISH_STATE_CAP}")
    pts = list(range(n))
    total = 0
    count = 0
    for low in itertools.product(range(p), repeat=d):
        coeffs = list(low) + [1]
        total += sum(_order_at(coeffs, a, p) for a in pts)
        count += 1
    return Fraction(total, count)
