"""Exact local masses for mod-p Galois representations and GL_2(F_p) counts.

A mass is a weighted count of conjugacy classes of homomorphisms, each class
weighted by one over the order of its centralizer.  Everything here is an
exact :class:`fractions.Fraction`; the small-group enumerations serve as
independent checks of the closed forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import is_prime

KINDS = ("unramified", "steinberg", "infinity", "ordinary", "supersingular", "at_p_total")
BRUTE_FORCE_MAX_P = 13
GROUP_ENUM_MAX_P = 7


def _need_prime(p: int, least: int = 2):
    if not is_prime(p) or p < least:
        raise ValueError(f"expected a prime >= {least}, got {p}")


def gl2_order(p: int) -> int:
    _need_prime(p)
    return (p * p - 1) * (p * p - p)


# ------------------------------------------------------------ small groups

Mat = tuple[int, int, int, int]


def gl2_elements(p: int) -> list[Mat]:
    """All invertible (a, b, c, d) over F_p, in lexicographic order."""
    _need_prime(p)
    return [m for m in itertools.product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p]


def _mul(x: Mat, y: Mat, p: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def _inv(x: Mat, p: int) -> Mat:
    a, b, c, d = x
    k = pow((a * d - b * c) % p, -1, p)
    return (d * k % p, -b * k % p, -c * k % p, a * k % p)


def _conj(g: Mat, x: Mat, p: int) -> Mat:
    return _mul(_mul(g, x, p), _inv(g, p), p)


def _centralizer_order(G: list[Mat], xs: tuple[Mat, ...], p: int) -> int:
    return sum(1 for g in G if all(_mul(g, x, p) == _mul(x, g, p) for x in xs))


def _orbits(G: list[Mat], items: list[tuple[Mat, ...]], acting: list[Mat], p: int) -> list[tuple[Mat, ...]]:
    """Representatives of ``items`` up to simultaneous conjugation by ``acting``."""
    seen: set[tuple[Mat, ...]] = set()
    reps = []
    for it in items:
        if it in seen:
            continue
        reps.append(it)
        for g in acting:
            seen.add(tuple(_conj(g, x, p) for x in it))
    return reps


def _small_p(p: int, cap: int):
    _need_prime(p)
    if p > cap:
        raise ValueError(f"enumeration over GL_2(F_{p}) is limited to p <= {cap}")


def count_trace(p: int, t: int, brute_force: bool = False) -> int:
    """Number of elements of GL_2(F_p) with trace ``t``."""
    _need_prime(p)
    t %= p
    if brute_force:
        _small_p(p, BRUTE_FORCE_MAX_P)
        return sum(1 for m in gl2_elements(p) if (m[0] + m[3]) % p == t)
    return p * p * (p - 1) if t == 0 else p * (p * p - p - 1)


def hasse_class_probability(p: int, ell: int = 2) -> Fraction:
    """Chance that a uniform element of GL_2(F_p) has trace in the Hasse set at ``ell``."""
    _need_prime(p)
    B = isqrt(4 * ell)
    if p <= 2 * B:
        raise ValueError(f"p={p} must exceed 2B = {2 * B}")
    good = 2 * B * count_trace(p, 1) + count_trace(p, 0)
    return Fraction(good, gl2_order(p))


# ------------------------------------------------------------ local masses


def steinberg_branch(p: int, v: int) -> str:
    return "v = 1 mod p" if v % p == 1 else "v != 1 mod p"


def local_mass(kind: str, p: int, v: int | None = None) -> Fraction:
    if kind not in KINDS:
        raise ValueError(f"unknown mass kind {kind!r}; expected one of {KINDS}")
    _need_prime(p, 5 if kind in ("ordinary", "at_p_total") else 2)
    if kind == "unramified":
        return Fraction(1)
    if kind == "steinberg":
        if v is None or not is_prime(v) or v == p:
            raise ValueError(f"Steinberg mass needs a prime v != p, got {v}")
        # v = 1 mod p: p(p-1) classes each with centralizer of order p(p-1);
        # otherwise p-1 classes each with central centralizer
        if v % p == 1:
            return Fraction(p * (p - 1), p * (p - 1))
        return Fraction(p - 1, p - 1)
    if kind == "infinity":
        return Fraction(1, (p - 1) ** 2)
    if kind == "ordinary":
        return sum(ordinary_breakdown(p), Fraction(0))
    if kind == "supersingular":
        return Fraction(1, p - 1)
    return local_mass("ordinary", p) + local_mass("supersingular", p)


def h1_size(p: int, e_squared_trivial: bool) -> int:
    """Size of H^1(G_p, chi e^2) for the mod-p cyclotomic character chi."""
    _need_prime(p, 5)
    return p * p if e_squared_trivial else p


def ordinary_breakdown(p: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """The four contributions to the ordinary mass at p.

    In order: non-split and split extensions for the p - 3 unramified
    characters e with e^2 != 1, then the same for the two with e^2 = 1.
    Non-split classes have central centralizer, split ones a split torus.
    """
    _need_prime(p, 5)
    center = Fraction(1, p - 1)
    torus = Fraction(1, (p - 1) ** 2)
    n_gen, n_quad = p - 3, 2
    return (
        center * n_gen * (h1_size(p, False) - 1),
        torus * n_gen,
        center * n_quad * (h1_size(p, True) - 1),
        torus * n_quad,
    )


def total_mass(p: int) -> Fraction:
    """m(S): infinity times p; unramified and Steinberg places contribute 1."""
    return local_mass("infinity", p) * local_mass("at_p_total", p)


def predicted_avg_take1(p: int) -> Fraction:
    return (p - 1) * total_mass(p)


def predicted_avg_take2(p: int) -> Fraction:
    return predicted_avg_take1(p) * hasse_class_probability(p)


# ----------------------------------------------------------- brute force


def brute_force_unramified_mass(p: int) -> Fraction:
    """Sum over conjugacy classes of GL_2(F_p) of 1/|centralizer|."""
    _small_p(p, GROUP_ENUM_MAX_P)
    G = gl2_elements(p)
    reps = _orbits(G, [(g,) for g in G], G, p)
    return sum((Fraction(1, _centralizer_order(G, r, p)) for r in reps), Fraction(0))


def brute_force_steinberg_mass(p: int, v: int) -> Fraction:
    """Mass of pairs (r(U), r(F)) with r(U) the standard unipotent and F U F^-1 = U^v."""
    _small_p(p, GROUP_ENUM_MAX_P)
    if not is_prime(v) or v == p:
        raise ValueError(f"v must be a prime different from p, got {v}")
    G = gl2_elements(p)
    U = (1, 1, 0, 1)
    Uv = (1, v % p, 0, 1)
    pairs = [(U, F) for F in G if _conj(F, U, p) == Uv]
    # classes of pairs meet the slice r(U) = U in orbits of the centralizer of U
    cu = [g for g in G if _mul(g, U, p) == _mul(U, g, p)]
    reps = _orbits(G, pairs, cu, p)
    return sum((Fraction(1, _centralizer_order(G, r, p)) for r in reps), Fraction(0))


def brute_force_odd_mass(p: int) -> Fraction:
    """1/|centralizer| of diag(1, -1), after checking its class size."""
    _small_p(p, GROUP_ENUM_MAX_P)
    G = gl2_elements(p)
    D = (1, 0, 0, p - 1)
    cls = {_conj(g, D, p) for g in G}
    if len(cls) * (p - 1) ** 2 != len(G):
        raise ArithmeticError(f"class of diag(1,-1) has size {len(cls)}, expected {len(G) // (p - 1) ** 2}")
    return Fraction(1, _centralizer_order(G, (D,), p))


# ------------------------------------------------------------------ report


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class MassReport:
    p: int
    masses: dict[str, Fraction]
    ordinary_breakdown: tuple[Fraction, ...]
    total: Fraction
    take1: Fraction
    take2: Fraction
    hasse_probability: Fraction

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "masses": {k: _q(v) for k, v in self.masses.items()},
            "ordinary_breakdown": [_q(x) for x in self.ordinary_breakdown],
            "total": _q(self.total),
            "take1": _q(self.take1),
            "take2": _q(self.take2),
            "hasse_probability": _q(self.hasse_probability),
        }


def mass_report(p: int, v: int | None = None) -> MassReport:
    _need_prime(p, 5)
    if v is None:
        v = 2 if p != 2 else 3
    masses = {k: local_mass(k, p, v) for k in KINDS}
    return MassReport(p, masses, ordinary_breakdown(p), total_mass(p),
                      predicted_avg_take1(p), predicted_avg_take2(p), hasse_class_probability(p))
