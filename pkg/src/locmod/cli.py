"""Command-line entry point.  Every subcommand prints JSON or CSV on stdout."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

CACHE_ENV = "LOCMOD_CACHE_DIR"
DEFAULT_CACHE = "./cache"

log = logging.getLogger("locmod")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _cache_dir(args) -> str:
    return args.cache_dir or os.environ.get(CACHE_ENV) or DEFAULT_CACHE


def cmd_masses(args):
    from .masses import mass_report

    _emit(mass_report(args.p, args.v).to_json())


def cmd_charpoly(args):
    from .spectra import level_spectrum

    sp = level_spectrum(args.level, args.p, with_al=False)
    _emit({
        "level": sp.N,
        "p": sp.p,
        "dim": sp.dim,
        "charpoly_t2": sp.charpoly_T2.to_list(),
        "m_new": sp.m_new,
        "m_new_roots": list(sp.m_new_roots),
        "m_hasse": sp.m_hasse,
    })


def cmd_scan(args):
    from .spectra import ScanFilters, scan

    filters = ScanFilters(odd=args.odd, squarefree=args.squarefree, max_omega=args.max_omega)
    ds = scan(args.lo, args.hi, args.p, filters, cache_dir=_cache_dir(args), workers=args.workers)
    text = ds.to_csv()
    if args.out:
        Path(args.out).write_text(text)
        by_s = {}
        for r in ds.rows:
            by_s[str(r.omega)] = by_s.get(str(r.omega), 0) + 1
        _emit({"rows": len(ds.rows), "by_omega": by_s, "skipped": {str(k): v for k, v in ds.skipped.items()}, "out": args.out})
    else:
        sys.stdout.write(text)


def cmd_alspectra(args):
    from .modsym.hecke import ALDecomposition, al_eigenspaces
    from .spectra import al_eigensystem_counts

    dec = al_eigenspaces(args.level, args.p)
    _emit({
        "level": args.level,
        "p": args.p,
        "primes": list(dec.primes),
        "dims": {ALDecomposition.label(chi): d for chi, d in dec.dims.items()},
        "counts": al_eigensystem_counts(args.level, args.p),
    })


def cmd_simulate(args):
    from .models import SimConfig, simulate_locally_modular_counts

    cfg = SimConfig(s=args.s, e=args.e, trials=args.trials, seed=args.seed, workers=args.workers)
    _emit(simulate_locally_modular_counts(cfg).to_json())


def cmd_vanish(args):
    from .models import expected_vanishing

    v = expected_vanishing(args.p, args.d, args.n, brute_force=args.brute_force)
    _emit({"p": args.p, "d": args.d, "n": args.n, "brute_force": args.brute_force,
           "value": f"{v.numerator}/{v.denominator}", "float": float(v)})


def cmd_tauberian(args):
    from .analytic import tauberian

    _emit(tauberian(args.x).to_json())


def cmd_report(args):
    from .pipeline import table_report, render
    from .spectra import ScanDataset

    ds = ScanDataset.from_csv(Path(args.data).read_text())
    sys.stdout.write(render(table_report(ds)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="locmod", description="Mod-p Hecke spectra, local masses and their models.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("masses", help="exact local masses and predicted averages")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--v", type=int, default=None, help="Steinberg place (default 2)")
    p.set_defaults(func=cmd_masses)

    p = sub.add_parser("charpoly", help="T_2 characteristic polynomial and counts at one level")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--p", type=int, default=101)
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("scan", help="spectra over a range of levels, as CSV")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--p", type=int, default=101)
    p.add_argument("--odd", action="store_true")
    p.add_argument("--squarefree", action="store_true")
    p.add_argument("--max-omega", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.add_argument("--cache-dir", default=None, help=f"default ${CACHE_ENV} or {DEFAULT_CACHE}")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("alspectra", help="Atkin-Lehner split of the new part at one level")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--p", type=int, default=101)
    p.set_defaults(func=cmd_alspectra)

    p = sub.add_parser("simulate", help="sum of fixed-point counts over 2^s eigenspaces")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--e", type=int, default=1000)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("vanish", help="expected vanishing order of a random monic polynomial")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--brute-force", action="store_true")
    p.set_defaults(func=cmd_vanish)

    p = sub.add_parser("tauberian", help="sum of 2^omega over squarefree N in [X, 2X]")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=cmd_tauberian)

    p = sub.add_parser("report", help="table statistics from a scan CSV")
    p.add_argument("--data", required=True)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except Exception as exc:  # noqa: BLE001 - reported as a structured error
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
