"""Per-level T_2 spectra over F_p, the m_new and m_Hasse counts, and range scans.

All spectra are taken on the cuspidal star-plus part of weight-2 modular
symbols for Gamma_0(N), which carries the Hecke action of S_2(Gamma_0(N)).
Scans store one JSON record per (N, p) and export CSV.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path

from .arith import LEVEL_CAP, divisors, is_prime, is_squarefree, omega
from .ffcore import FpPoly, _rational_roots, charpoly, root_multiplicities, simple_roots
from .modsym.hecke import ALDecomposition, al_decomposition_of, hecke_T
from .modsym.manin import _cuspidal_plus, manin_space

log = logging.getLogger(__name__)

SCAN_SIGN = 1
RECORD_FIELDS = ("n", "p", "omega", "dim", "charpoly_t2", "m_new", "m_new_roots", "m_hasse", "al_counts")
CSV_HEADER = ("N", "p", "omega", "dim", "m_new", "m_hasse")


class MissingDivisorData(KeyError):
    pass


class CacheCorruption(RuntimeError):
    def __init__(self, path, reason: str):
        super().__init__(f"corrupt cache record {path}: {reason}")
        self.path = Path(path)


@dataclass(frozen=True)
class HasseSet:
    """Residues mod p of the integers allowed by the Hasse bound at ``ell``."""

    p: int
    ell: int = 2

    @property
    def bound(self) -> int:
        return isqrt(4 * self.ell)

    @property
    def residues(self) -> frozenset[int]:
        B = self.bound
        if self.p <= 2 * B:
            raise ValueError(f"p={self.p} must exceed 2B = {2 * B}")
        return frozenset(n % self.p for n in range(-B, B + 1))


@dataclass
class LevelSpectrum:
    N: int
    p: int
    s: int
    dim: int
    charpoly_T2: FpPoly
    divisor_charpolys: dict[int, FpPoly]
    m_new: int
    m_new_roots: tuple[int, ...]
    m_hasse: int
    al_counts: dict[str, int] | None = None

    def summary(self) -> "LevelSummary":
        return LevelSummary(
            self.N, self.p, self.s, self.dim, tuple(self.charpoly_T2.to_list()),
            self.m_new, self.m_new_roots, self.m_hasse, dict(self.al_counts or {}),
        )


@dataclass(frozen=True)
class LevelSummary:
    """The cached part of a :class:`LevelSpectrum` (no divisor polynomials)."""

    N: int
    p: int
    omega: int
    dim: int
    charpoly_t2: tuple[int, ...]
    m_new: int
    m_new_roots: tuple[int, ...]
    m_hasse: int
    al_counts: dict[str, int] = field(default_factory=dict, hash=False)

    def to_record(self) -> dict:
        return {
            "n": self.N,
            "p": self.p,
            "omega": self.omega,
            "dim": self.dim,
            "charpoly_t2": list(self.charpoly_t2),
            "m_new": self.m_new,
            "m_new_roots": list(self.m_new_roots),
            "m_hasse": self.m_hasse,
            "al_counts": dict(sorted(self.al_counts.items())),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "LevelSummary":
        return cls(
            int(rec["n"]), int(rec["p"]), int(rec["omega"]), int(rec["dim"]),
            tuple(int(c) for c in rec["charpoly_t2"]), int(rec["m_new"]),
            tuple(int(a) for a in rec["m_new_roots"]), int(rec["m_hasse"]),
            {str(k): int(v) for k, v in rec["al_counts"].items()},
        )


@dataclass(frozen=True)
class ScanFilters:
    odd: bool = True
    squarefree: bool = True
    max_omega: int | None = 3

    def admits(self, N: int) -> bool:
        if self.odd and N % 2 == 0:
            return False
        if self.squarefree and not is_squarefree(N):
            return False
        if self.max_omega is not None and omega(N) > self.max_omega:
            return False
        return True


@dataclass
class ScanDataset:
    lo: int
    hi: int
    p: int
    filters: ScanFilters
    rows: list[LevelSummary]
    skipped: dict[int, str] = field(default_factory=dict)

    def by_omega(self, s: int) -> list[LevelSummary]:
        return [r for r in self.rows if r.omega == s]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow((r.N, r.p, r.omega, r.dim, r.m_new, r.m_hasse))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, *, lo: int | None = None, hi: int | None = None) -> "ScanDataset":
        reader = csv.reader(io.StringIO(text))
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        rows = []
        for N, p, s, dim, mn, mh in reader:
            rows.append(LevelSummary(int(N), int(p), int(s), int(dim), (), int(mn), (), int(mh)))
        ns = [r.N for r in rows]
        p = rows[0].p if rows else 0
        return cls(lo if lo is not None else min(ns, default=0), hi if hi is not None else max(ns, default=0),
                   p, ScanFilters(odd=False, squarefree=False, max_omega=None), rows)


# ------------------------------------------------------------------ counts


def _check_level(N: int, p: int):
    if not 1 <= N <= LEVEL_CAP:
        raise ValueError(f"level {N} outside [1, {LEVEL_CAP}]")
    if N % 2 == 0:
        raise ValueError(f"T_2 is not a good Hecke operator at even level {N}")
    if not is_prime(p) or p in (2, 3):
        raise ValueError(f"characteristic {p} is not a prime >= 5")


def new_simple_roots(charpoly_N: FpPoly, divisor_charpolys: dict[int, FpPoly], N: int | None = None) -> tuple[int, ...]:
    """Simple roots of ``charpoly_N`` that are roots of no divisor polynomial."""
    if N is not None:
        missing = [M for M in divisors(N)[:-1] if M not in divisor_charpolys]
        if missing:
            raise MissingDivisorData(f"no T_2 polynomial for divisors {missing} of {N}")
    if charpoly_N.degree <= 0:
        return ()
    old = set()
    for g in divisor_charpolys.values():
        if g.degree > 0:
            old.update(_rational_roots(g))
    return tuple(sorted(a for a in simple_roots(charpoly_N) if a not in old))


def m_new(charpoly_N: FpPoly, divisor_charpolys: dict[int, FpPoly], N: int | None = None) -> int:
    """Number of simple linear factors of ``charpoly_N`` dividing no divisor polynomial.

    With ``N`` given, every proper divisor of ``N`` must be a key.
    """
    return len(new_simple_roots(charpoly_N, divisor_charpolys, N))


def m_hasse(charpoly_N: FpPoly, H: HasseSet | None = None, *, multiplicity: bool = True) -> int:
    """Linear factors of ``charpoly_N`` whose root lies in the Hasse residue set.

    Factors are counted with multiplicity; ``multiplicity=False`` counts
    distinct roots instead, which is at most 2B + 1.
    """
    if H is None:
        H = HasseSet(charpoly_N.p)
    if H.p != charpoly_N.p:
        raise ValueError("Hasse set and polynomial live over different fields")
    res = H.residues
    if charpoly_N.degree <= 0:
        return 0
    if not multiplicity:
        return sum(1 for a in res if charpoly_N(a) == 0)
    return sum(k for a, k in root_multiplicities(charpoly_N).items() if a in res)


# ---------------------------------------------------------------- spectra

_CHARPOLY_MEMO: dict[tuple[int, int], FpPoly] = {}


def charpoly_t2(N: int, p: int, cache_dir: str | os.PathLike | None = None) -> FpPoly:
    """Characteristic polynomial of T_2 on the cuspidal plus part at level ``N``."""
    key = (N, p)
    if key in _CHARPOLY_MEMO:
        return _CHARPOLY_MEMO[key]
    f = None
    if cache_dir is not None:
        rec = read_record(cache_dir, N, p)
        if rec is not None:
            f = FpPoly.from_list(rec.charpoly_t2, p)
    if f is None:
        _check_level(N, p)
        space = manin_space(N, p, SCAN_SIGN)
        V = _cuspidal_plus(space)
        f = charpoly(hecke_T(space, V, 2)) if V.dim else FpPoly.one(p)
    _CHARPOLY_MEMO[key] = f
    return f


def al_eigensystem_counts(N: int, p: int) -> dict[str, int]:
    """Simple F_p-roots of T_2 on each Atkin-Lehner eigenspace of the new part.

    Keys are sign strings such as ``"+-"`` ordered by increasing prime.
    """
    _check_level(N, p)
    if not is_squarefree(N):
        raise ValueError(f"level {N} is not squarefree")
    space = manin_space(N, p, SCAN_SIGN)
    dec = al_decomposition_of(space)
    return _al_counts(space, dec)


def _al_counts(space, dec: ALDecomposition) -> dict[str, int]:
    out = {}
    for chi, V in dec.pieces.items():
        if V.dim == 0:
            out[dec.label(chi)] = 0
            continue
        f = charpoly(hecke_T(space, V, 2))
        out[dec.label(chi)] = len(simple_roots(f))
    return out


def level_spectrum(N: int, p: int, *, with_al: bool = True, cache_dir=None) -> LevelSpectrum:
    """T_2 polynomial at ``N`` and all proper divisors, with the derived counts."""
    _check_level(N, p)
    f = charpoly_t2(N, p)
    divs = {M: charpoly_t2(M, p, cache_dir) for M in divisors(N)[:-1]}
    roots = new_simple_roots(f, divs, N)
    al = None
    if with_al and is_squarefree(N):
        al = al_eigensystem_counts(N, p)
    return LevelSpectrum(
        N=N, p=p, s=omega(N) if N > 1 else 0, dim=f.degree if f.degree > 0 else 0,
        charpoly_T2=f, divisor_charpolys=divs, m_new=len(roots), m_new_roots=roots,
        m_hasse=m_hasse(f), al_counts=al,
    )


# ------------------------------------------------------------------ cache


def record_path(cache_dir, N: int, p: int) -> Path:
    return Path(cache_dir) / str(p) / f"{N}.json"


def read_record(cache_dir, N: int, p: int) -> LevelSummary | None:
    """Cached summary, ``None`` on a miss; missing or partial records are misses."""
    path = record_path(cache_dir, N, p)
    try:
        text = path.read_text()
    except FileNotFoundError:
        return None
    if not text.strip():
        return None
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CacheCorruption(path, f"invalid JSON ({exc})") from None
    if not isinstance(rec, dict):
        raise CacheCorruption(path, "record is not an object")
    if any(k not in rec for k in RECORD_FIELDS):
        return None
    try:
        out = LevelSummary.from_record(rec)
    except (TypeError, ValueError, AttributeError) as exc:
        raise CacheCorruption(path, f"bad field ({exc})") from None
    if out.N != N or out.p != p:
        raise CacheCorruption(path, f"record is for (N={out.N}, p={out.p})")
    return out


def write_record(cache_dir, summary: LevelSummary) -> Path:
    path = record_path(cache_dir, summary.N, summary.p)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{summary.N}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(summary.to_record(), fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


# ------------------------------------------------------------------- scan


def _scan_one(args) -> tuple[int, LevelSummary | None, str | None]:
    N, p, cache_dir = args
    try:
        if cache_dir is not None:
            hit = read_record(cache_dir, N, p)
            if hit is not None:
                return N, hit, None
        summ = level_spectrum(N, p, cache_dir=cache_dir).summary()
        if cache_dir is not None:
            write_record(cache_dir, summ)
        return N, summ, None
    except CacheCorruption:
        raise
    except (ValueError, ArithmeticError) as exc:
        return N, None, str(exc)


def scan(lo: int, hi: int, p: int, filters: ScanFilters | None = None, *,
         cache_dir=None, workers: int = 1, progress=None) -> ScanDataset:
    """Spectra for every level in ``[lo, hi]`` admitted by ``filters``.

    Rows come back sorted by level whatever the worker count.  Levels that
    cannot be computed are logged and listed in ``skipped``.
    """
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    filters = filters or ScanFilters()
    levels = [N for N in range(max(lo, 1), hi + 1) if filters.admits(N)]
    jobs = [(N, p, None if cache_dir is None else str(cache_dir)) for N in levels]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_scan_one, jobs, chunksize=4))
    else:
        results = []
        for i, job in enumerate(jobs):
            results.append(_scan_one(job))
            if progress is not None:
                progress(i + 1, len(jobs), job[0])
    rows, skipped = [], {}
    for N, summ, err in sorted(results, key=lambda t: t[0]):
        if summ is None:
            log.warning("skipping level %d: %s", N, err)
            skipped[N] = err
        else:
            rows.append(summ)
    return ScanDataset(lo, hi, p, filters, rows, skipped)
