"""Acceptance checks, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
written straight to the terminal.  The level scan reads and fills the cache
directory named by ``LOCMOD_CACHE_DIR`` (default: ``cache/`` at the repo root).
"""

from __future__ import annotations

import csv
import os
import time
from fractions import Fraction
from math import log
from pathlib import Path

import pytest

from locmod.analytic import euler_constant, sum_2_omega, tauberian_ratio
from locmod.arith import primes_up_to
from locmod.ffcore import FpMatrix
from locmod.masses import (
    brute_force_odd_mass, brute_force_steinberg_mass, count_trace, gl2_elements, gl2_order,
    hasse_class_probability, ordinary_breakdown, total_mass,
)
from locmod.models import SimConfig, expected_vanishing, simulate_locally_modular_counts
from locmod.modsym.hecke import hecke_T
from locmod.modsym.manin import cuspidal_plus, manin_space
from locmod.pipeline import table_report
from locmod.spectra import ScanFilters, scan

from oracles import CURVES, genus_x0_naive, trace_of_frobenius

ROOT = Path(__file__).resolve().parents[1]
CACHE = Path(os.environ.get("LOCMOD_CACHE_DIR", ROOT / "cache"))
LEVEL_LOG = ROOT / "acceptance_levels.csv"

TABLE_MEAN = {1: 2.18543, 2: 4.33333, 3: 7.1724}
TABLE_VAR = {1: 2.382834, 2: 4.54124, 3: 6.773229}
TABLE_DISC = {1: 0.05248, 2: 0.07055, 3: 0.12574}
SIZES = {1: 302, 2: 489, 3: 203}


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\nCRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {n}: {detail}"

    return emit


@pytest.fixture(scope="module")
def dataset():
    t = time.time()
    ds = scan(2500, 5000, 101, ScanFilters(odd=True, squarefree=True, max_omega=3),
              cache_dir=CACHE, workers=os.cpu_count() or 1)
    ds.elapsed = time.time() - t
    return ds


def test_criterion_01_mass_identities(verdict):
    t = time.time()
    bad = []
    primes = [int(q) for q in primes_up_to(10**4) if q >= 5]
    for p in primes:
        if sum(ordinary_breakdown(p)) != 3 * p - 1 + Fraction(1, p - 1):
            bad.append(("breakdown", p))
        if total_mass(p) != Fraction(1, (p - 1) ** 2) * (3 * p - 1 + Fraction(2, p - 1)):
            bad.append(("total", p))
    dt = time.time() - t
    verdict(1, not bad and dt < 5, f"{len(primes)} primes, mismatches={bad[:3]}, {dt:.2f}s (<5s)")


def test_criterion_02_trace_counts(verdict):
    t = time.time()
    bad = []
    for p in (3, 5, 7):
        G = gl2_elements(p)
        if len(G) != (p * p - 1) * (p * p - p) or gl2_order(p) != len(G):
            bad.append(("order", p))
        for a in range(p):
            n = sum(1 for m in G if (m[0] + m[3]) % p == a)
            want = p * p * (p - 1) if a == 0 else p * (p * p - p - 1)
            if n != want or count_trace(p, a, brute_force=True) != want:
                bad.append((p, a, n, want))
    dt = time.time() - t
    verdict(2, not bad and dt < 30, f"p in 3,5,7 mismatches={bad}, {dt:.2f}s (<30s)")


def test_criterion_03_steinberg(verdict):
    cases = [(3, 7), (3, 5), (5, 11), (5, 7), (7, 29), (7, 5)]
    got = {pv: brute_force_steinberg_mass(*pv) for pv in cases}
    verdict(3, all(v == 1 for v in got.values()), f"masses {', '.join(f'{p},{v}:{m}' for (p, v), m in got.items())}")


def test_criterion_04_odd_mass(verdict):
    got = {p: brute_force_odd_mass(p) for p in (3, 5, 7)}
    ok = all(got[p] == Fraction(1, (p - 1) ** 2) for p in got)
    verdict(4, ok, f"class-size checked, masses {got}")


def test_criterion_05_hasse_probability(verdict):
    h = hasse_class_probability(101)
    ok = h == Fraction(5_100_096, 103_020_000) and abs(h - Fraction(5, 101)) < Fraction(1, 101**2)
    verdict(5, ok, f"value {h} = {float(h):.6f}, |h-5/101| = {float(abs(h - Fraction(5, 101))):.2e}")


def test_criterion_06_dimensions(verdict):
    t = time.time()
    bad = []
    for N in range(1, 301):
        g = genus_x0_naive(N)
        for sign in (1, 0):
            d = cuspidal_plus(manin_space(N, 101, sign)).dim
            if d != g:
                bad.append((N, sign, d, g))
    dt = time.time() - t
    verdict(6, not bad and dt < 120, f"N<=300 both signs, mismatches={bad[:5]}, {dt:.1f}s (<120s)")


def test_criterion_07_hecke_sanity(verdict):
    got = {}
    for N, ainv in sorted(CURVES.items()):
        a2 = trace_of_frobenius(ainv, 2)
        M = manin_space(N, 101, 1)
        got[N] = (hecke_T(M, None, 2) == FpMatrix([[a2 % 101]], 101), a2)
    verdict(7, all(ok for ok, _ in got.values()), f"a2 from point counts {{N: a2}} = { {N: a for N, (_, a) in got.items()} }")


def _write_level_log(ds):
    with LEVEL_LOG.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("N", "omega", "dim", "m_new", "m_new_roots", "m_hasse"))
        for r in ds.rows:
            w.writerow((r.N, r.omega, r.dim, r.m_new, " ".join(map(str, r.m_new_roots)), r.m_hasse))


def test_criterion_08_mnew_table(verdict, dataset):
    rep = table_report(dataset)
    sizes = {s: rep["m_new"][str(s)]["n"] for s in (1, 2, 3)}
    means = {s: rep["m_new"][str(s)]["mean"] for s in (1, 2, 3)}
    vars_ = {s: rep["m_new"][str(s)]["variance"] for s in (1, 2, 3)}
    size_ok = sizes == SIZES
    strict = size_ok and all(abs(means[s] - TABLE_MEAN[s]) <= 0.05 for s in means) and all(
        abs(vars_[s] - TABLE_VAR[s]) <= 0.02 * TABLE_VAR[s] for s in vars_)
    fallback = size_ok and all(abs(means[s] - TABLE_MEAN[s]) <= 0.15 for s in means)
    if not strict:
        _write_level_log(dataset)
    hours = dataset.elapsed / 3600
    detail = (f"sizes {sizes}, means { {s: round(m, 5) for s, m in means.items()} }, "
              f"variances { {s: round(v, 5) for s, v in vars_.items()} }, "
              f"{'strict' if strict else 'fallback (per-level log: ' + LEVEL_LOG.name + ')' if fallback else 'failed'}, "
              f"scan {hours:.2f}h")
    verdict(8, (strict or fallback) and hours <= 4, detail)


def test_criterion_09_discrepancies(verdict, dataset):
    rep = table_report(dataset)
    disc = {s: rep["m_new"][str(s)]["discrepancy"] for s in (1, 2, 3)}
    ok = all(abs(disc[s] - TABLE_DISC[s]) <= 0.02 for s in disc)
    verdict(9, ok, f"discrepancy vs Poisson(2^s) { {s: round(d, 5) for s, d in disc.items()} }")


def test_criterion_10_hasse_table(verdict, dataset):
    h = table_report(dataset)["m_hasse"]
    ok = (h["n"] == 302 and abs(h["mean"] - 0.45033) <= 0.05 and abs(h["variance"] - 0.67137) <= 0.1
          and abs(h["zero_fraction"] - 0.70) <= 0.03 and h["at_most_one_fraction"] >= 0.90)
    verdict(10, ok, f"n={h['n']} mean={h['mean']:.5f} var={h['variance']:.5f} "
                    f"zero={h['zero_fraction']:.3f} le1={h['at_most_one_fraction']:.3f}")


def test_criterion_11_permutation_model(verdict):
    t = time.time()
    one = simulate_locally_modular_counts(SimConfig(s=0, e=1000, trials=100_000, seed=11))
    two = simulate_locally_modular_counts(SimConfig(s=2, e=1000, trials=100_000, seed=12))
    dt = time.time() - t
    ok = (abs(one.dist.mean() - 1) <= 0.02 and one.discrepancy < 0.01 and abs(two.dist.mean() - 4) <= 0.05
          and dt < 30)
    verdict(11, ok, f"s=0 mean {one.dist.mean():.4f} disc {one.discrepancy:.4f}; s=2 mean {two.dist.mean():.4f}; "
                    f"{dt:.1f}s (<30s)")


def test_criterion_12_expected_vanishing(verdict):
    bad = [(p, d, n) for p in (2, 3) for d in range(0, 6) for n in range(0, 3)
           if expected_vanishing(p, d, n) != expected_vanishing(p, d, n, brute_force=True)]
    v = expected_vanishing(3, 3, 1, brute_force=True)
    verdict(12, not bad and v == Fraction(13, 27), f"mismatches={bad}, (3,3,1) -> {v}")


def test_criterion_13_tauberian(verdict):
    t = time.time()
    r4, r7 = tauberian_ratio(10**4), tauberian_ratio(10**7)
    a = euler_constant().value
    band = {}
    for k in range(3, 8):
        X = 10**k
        s = sum_2_omega(X)
        band[k] = a / 2 * X * log(X) <= s <= 2 * a * X * log(X)
    dt = time.time() - t
    ok = 0.7 <= r4 <= 1.3 and abs(r7 - 1) < abs(r4 - 1) and all(band.values()) and dt < 300
    verdict(13, ok, f"ratio(1e4)={r4:.4f} ratio(1e7)={r7:.4f} band {band} {dt:.1f}s (<300s)")
