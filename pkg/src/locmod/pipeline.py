"""Summary statistics over scan datasets and the report that mirrors the tables."""

from __future__ import annotations

import json

from .models import Distribution, poisson_cdf, poisson_discrepancy
from .spectra import ScanDataset

SCHEMA = 1
OMEGAS = (1, 2, 3)
VARIANCE_DDOF = 0


class EmpiricalDist(Distribution):
    """Frequency table of observed nonnegative integers."""

    def cdf_series(self) -> list[tuple[int, float]]:
        out, acc = [], 0
        for k in range(0, max(self.counts, default=-1) + 1):
            acc += self.counts.get(k, 0)
            out.append((k, acc / self.total))
        return out

    def pmf_series(self) -> list[tuple[int, float]]:
        return [(k, self.counts.get(k, 0) / self.total) for k in range(0, max(self.counts, default=-1) + 1)]


def mean(d: Distribution) -> float:
    return d.mean()


def variance(d: Distribution, ddof: int = VARIANCE_DDOF) -> float:
    return d.variance(ddof)


def discrepancy(d: Distribution, lam: float) -> float:
    """Kolmogorov distance between ``d`` and Poisson(lam) on integer thresholds."""
    return poisson_discrepancy(d, lam)


def _check_dataset(ds: ScanDataset):
    for r in ds.rows:
        if r.p != ds.p:
            raise ValueError(f"row N={r.N} is at p={r.p}, dataset is at p={ds.p}")
        if not ds.lo <= r.N <= ds.hi:
            raise ValueError(f"row N={r.N} lies outside [{ds.lo}, {ds.hi}]")
        if not ds.filters.admits(r.N):
            raise ValueError(f"row N={r.N} violates the dataset filters {ds.filters}")
        if r.omega not in range(0, 32):
            raise ValueError(f"row N={r.N} has impossible omega {r.omega}")


def _block(values: list[int], lam: float | None) -> dict:
    if not values:
        return {"n": 0}
    d = EmpiricalDist.from_values(values)
    out = {"n": d.total, "mean": d.mean(), "variance": d.variance(VARIANCE_DDOF) if d.total > VARIANCE_DDOF else None}
    if lam is not None:
        out["poisson_rate"] = lam
        out["discrepancy"] = discrepancy(d, lam)
    out["pmf"] = [[k, y] for k, y in d.pmf_series()]
    out["cdf"] = [[k, y] for k, y in d.cdf_series()]
    return out


def table_report(ds: ScanDataset) -> dict:
    """Per-omega m_new statistics against Poisson(2^s) and m_Hasse over prime levels."""
    _check_dataset(ds)
    blocks = {}
    for s in OMEGAS:
        vals = [r.m_new for r in ds.rows if r.omega == s]
        b = _block(vals, float(2**s))
        if vals:
            b["poisson_cdf"] = [[k, poisson_cdf(2.0**s, k)] for k, _ in b["cdf"]]
        blocks[str(s)] = b
    hv = [r.m_hasse for r in ds.rows if r.omega == 1]
    hasse = _block(hv, None)
    if hv:
        hasse["zero_fraction"] = sum(1 for v in hv if v == 0) / len(hv)
        hasse["at_most_one_fraction"] = sum(1 for v in hv if v <= 1) / len(hv)
    return {
        "schema": SCHEMA,
        "p": ds.p,
        "range": [ds.lo, ds.hi],
        "levels": len(ds.rows),
        "m_new": blocks,
        "m_hasse": hasse,
    }


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
