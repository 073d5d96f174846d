import json
from math import exp

import pytest

from locmod.models import poisson_pmf
from locmod.pipeline import EmpiricalDist, discrepancy, mean, table_report, render, variance
from locmod.spectra import LevelSummary, ScanDataset, ScanFilters, scan


def test_estimators():
    d = EmpiricalDist({3: 10})
    assert mean(d) == 3 and variance(d) == 0
    assert mean(EmpiricalDist({0: 4, 2: 4})) == 1
    assert variance(EmpiricalDist({0: 1, 2: 1})) == 1
    assert variance(EmpiricalDist({0: 1, 2: 1}), ddof=1) == 2
    with pytest.raises(ValueError):
        mean(EmpiricalDist({}))


def test_discrepancy_examples():
    assert discrepancy(EmpiricalDist({0: 5}), 1.0) == pytest.approx(1 - exp(-1), abs=1e-12)
    d = EmpiricalDist({k: round(poisson_pmf(1.0, k) * 10**15) for k in range(30)})
    assert discrepancy(d, 1.0) < 1e-10


def test_cdf_series():
    d = EmpiricalDist({0: 1, 2: 3})
    assert d.cdf_series() == [(0, 0.25), (1, 0.25), (2, 1.0)]


def test_report_toy_dataset():
    ds = scan(11, 11, 101, ScanFilters())
    rep = table_report(ds)
    assert rep["schema"] == 1
    assert rep["m_new"]["1"]["n"] == 1 and rep["m_new"]["1"]["mean"] == 1
    assert rep["m_new"]["2"] == {"n": 0}
    assert rep["m_hasse"]["zero_fraction"] == 0
    assert render(rep) == render(table_report(ds))
    json.loads(render(rep))


def test_report_rejects_filter_mismatch():
    row = LevelSummary(12, 101, 2, 0, (1,), 0, (), 0)
    ds = ScanDataset(1, 20, 101, ScanFilters(), [row])
    with pytest.raises(ValueError):
        table_report(ds)
    ds = ScanDataset(1, 20, 101, ScanFilters(), [LevelSummary(11, 5, 1, 1, (2, 1), 1, (3,), 1)])
    with pytest.raises(ValueError):
        table_report(ds)
