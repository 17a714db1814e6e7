"""Command-line driver: ``python -m spherical_ic <verb> <datum> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from collections import Counter
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

from .catalog import DatumLoadError, catalog_names, load_datum
from .crystal import CrystalError, character, crystal_to_json_text, weyl_reflection
from .harmonic import (
    PoleError,
    evaluate_series,
    grid_csv,
    plancherel_integrand,
    quadrature_norm,
    random_points,
    tail_bound,
)
from .lattice import RootDatumError
from .series import (
    GradedSeries,
    QLaurent,
    asymptotics_series,
    basic_function,
    frobenius_trace,
    partitions,
    pushforward_series,
    sym_series,
)
from .spherical import FrobeniusDatum, monoid_elements, validate
from .xcrystal import Check, XCrystalError, build_xcrystal, normality, verify_properties

VERBS = ("validate", "crystal", "series", "basic", "plancherel", "check")

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spherical-ic", description="Crystals and basic functions of spherical varieties.")
    p.add_argument("verb", choices=VERBS + ("list",))
    p.add_argument("datum", nargs="?", default="", help="catalog name or JSON file (omit to list the catalog)")
    p.add_argument("--bound", type=Fraction, default=Fraction(6), help="grading truncation bound")
    p.add_argument("--grid", type=int, default=64, help="quadrature grid points per axis")
    p.add_argument("--q", type=float, default=4.0, help="residue field size")
    p.add_argument("--seed", type=int, default=0, help="seed for random Satake points")
    p.add_argument("--samples", type=int, default=100, help="number of random Satake points in check")
    p.add_argument("--kind", choices=("pushforward", "asymptotics", "sym", "frobenius"), default="pushforward")
    p.add_argument("--format", choices=("json", "dot", "csv", "text"), default=None)
    p.add_argument("--output", type=Path, default=None, help="write the artifact here instead of stdout")
    return p


def _emit(text: str, output: Path | None):
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _series_json(s: GradedSeries) -> str:
    rows = [{"key": list(k), "value": {str(e): c for e, c in v.terms.items()}} for k, v in s.items()]
    return json.dumps({"bound": str(s.bound), "coefficients": rows}, indent=2) + "\n"


def _cmd_validate(d, args) -> int:
    viol = validate(d)
    if args.format == "json":
        _emit(json.dumps({"datum": d.name, "valid": not viol,
                          "violations": [{"code": v.code, "message": v.message} for v in viol]}, indent=2) + "\n",
              args.output)
    else:
        _emit("valid\n" if not viol else "".join(f"{v}\n" for v in viol), args.output)
    return EXIT_OK if not viol else EXIT_INVALID


def _cmd_crystal(d, args) -> int:
    x = build_xcrystal(d)
    rep = verify_properties(x)
    for line in rep.lines():
        print(line, file=sys.stderr)
    fmt = args.format or "json"
    if fmt == "dot":
        labels = [f"{k}{'' if k == 'open' else list(w)} c={x.twist[b]}"
                  for b, (k, w) in enumerate(x.provenance(b) for b in x.crystal.elements)]
        _emit(x.crystal.to_dot(d.name or "crystal", labels), args.output)
    elif fmt == "json":
        ann = x.annotations()
        ann["checks"] = [c.line() for c in rep.checks]
        ann["warnings"] = list(x.warnings)
        _emit(crystal_to_json_text(x.crystal, ann), args.output)
    else:
        raise ValueError(f"format {fmt} is not available for crystals")
    return EXIT_OK if rep.passed else EXIT_INVALID


def _series_for(d, args) -> GradedSeries:
    x = build_xcrystal(d)
    for w in x.warnings:
        print(f"warning: {w}", file=sys.stderr)
    fn = {"pushforward": pushforward_series, "asymptotics": asymptotics_series, "sym": sym_series,
          "frobenius": frobenius_trace}[args.kind]
    return fn(x, args.bound)


def _cmd_series(d, args) -> int:
    s = _series_for(d, args)
    fmt = args.format or "csv"
    if fmt not in ("csv", "json"):
        raise ValueError(f"format {fmt} is not available for series")
    _emit(s.to_csv() if fmt == "csv" else _series_json(s), args.output)
    return EXIT_OK


def _cmd_basic(d, args) -> int:
    x = build_xcrystal(d)
    for w in x.warnings:
        print(f"warning: {w}", file=sys.stderr)
    table = basic_function(x, args.bound)
    fmt = args.format or "text"
    if fmt == "json":
        text = json.dumps([{"key": list(k), "value": str(v)} for k, v in table.items()], indent=2) + "\n"
    elif fmt == "csv":
        text = "key,value\n" + "".join(f"\"{list(k)}\",{v}\n" for k, v in table.items())
    elif fmt == "text":
        text = "".join(f"{list(k)}\t{v}\n" for k, v in table.items())
    else:
        raise ValueError(f"format {fmt} is not available for basic functions")
    _emit(text, args.output)
    return EXIT_OK


def _cmd_plancherel(d, args) -> int:
    x = build_xcrystal(d)
    if (args.format or "json") == "csv":
        _emit(grid_csv(x, args.bound, args.grid, args.q), args.output)
        return EXIT_OK
    res = quadrature_norm(x, args.bound, args.grid, args.q)
    res.warnings = list(x.warnings) + res.warnings
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(res.to_json(), args.output)
    return EXIT_OK


def run_checks(d, bound, grid: int, q: float, seed: int, samples: int = 100) -> list[Check]:
    """Property suite used by the ``check`` verb."""
    checks: list[Check] = []
    viol = validate(d)
    checks.append(Check("datum-valid", not viol, "; ".join(map(str, viol))))
    if viol:
        return checks
    x = build_xcrystal(d)
    rep = verify_properties(x)
    checks += rep.checks
    checks.append(Check("normality", normality(x).normal, str(normality(x))))

    rd = d.root_datum
    ok = all(Counter(x.crystal.wt[s.start:s.start + s.size])
             == Counter(character(rd.dominant_translate(s.weight), rd))
             for s in x.summands if s.size)
    checks.append(Check("summand-characters", ok))

    ok = all(x.crystal.wt[weyl_reflection(x.crystal, i, b)] == rd.reflect(i, x.crystal.wt[b])
             for i in x.crystal.indices for b in x.crystal.elements)
    checks.append(Check("weyl-action-equivariant", ok))

    sym = sym_series(x, bound)
    checks.append(Check("sym-oracle", _sym_oracle_agrees(x, sym)))
    asym = asymptotics_series(x, bound)
    basic = basic_function(x, bound)
    checks.append(Check("basic-restriction", all(asym[k] == v for k, v in basic.items())))
    bigger = asymptotics_series(x, bound + 2)
    checks.append(Check("truncation-coherence", all(bigger[k] == v for k, v in asym.items())))

    quad = quadrature_norm(x, bound, grid, q)
    checks.append(Check("quadrature-parseval", quad.grid_ok and quad.difference <= 1e-9,
                        f"difference {quad.difference:.3g}"))
    tail = tail_bound(x, bound, q)
    if math.isfinite(tail):
        worst = 0.0
        for chi in random_points(d.rank, samples, seed, q):
            try:
                exact = plancherel_integrand(x, chi)
            except PoleError:
                continue
            approx = abs(evaluate_series(asym, chi)) ** 2
            allowed = tail * (math.sqrt(exact) + math.sqrt(approx)) + 1e-9
            worst = max(worst, abs(exact - approx) / allowed)
        checks.append(Check("pointwise-truncation", worst <= 1, f"worst error / tail bound = {worst:.3g}"))
    else:
        checks.append(Check("pointwise-truncation", True, "skipped: zero twist gives an unbounded tail"))

    if d.frobenius is not None:
        try:
            frobenius_trace(x, bound)
            checks.append(Check("frobenius-trace", True))
        except XCrystalError as exc:
            checks.append(Check("frobenius-trace", False, str(exc)))
    ident = d.with_frobenius(FrobeniusDatum.identity(d.rank, d.color_names, rd.semisimple_rank))
    xi = build_xcrystal(ident)
    checks.append(Check("identity-frobenius", frobenius_trace(xi, bound) == pushforward_series(xi, bound)))
    return checks


def _sym_oracle_agrees(x, sym: GradedSeries) -> bool:
    """Coefficientwise comparison with a sum over multisets of plus elements, grouped by partitions."""
    by_weight: dict = {}
    for b in x.plus:
        by_weight.setdefault(x.crystal.wt[b], []).append(b)
    for k in sym.keys() | set(monoid_elements(x.datum, sym.bound)):
        total = QLaurent()
        for part in partitions(k, x.datum):
            if not all(w in by_weight for w in part):
                continue
            terms = [QLaurent.one()]
            for w, n in Counter(part).items():
                choices = [QLaurent.monomial(-sum(x.twist[b] for b in combo))
                           for combo in combinations_with_replacement(by_weight[w], n)]
                terms = [t * c for t in terms for c in choices]
            for t in terms:
                total = total + t
        if total != sym[k]:
            return False
    return True


def _cmd_check(d, args) -> int:
    checks = run_checks(d, args.bound, args.grid, args.q, args.seed, args.samples)
    passed = all(c.passed for c in checks)
    if args.format == "json":
        _emit(json.dumps({"datum": d.name, "passed": passed,
                          "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]},
                         indent=2) + "\n", args.output)
    else:
        _emit("".join(c.line() + "\n" for c in checks) + f"{'all checks passed' if passed else 'FAILED'}\n",
              args.output)
    return EXIT_OK if passed else EXIT_INVALID


COMMANDS = {
    "validate": _cmd_validate,
    "crystal": _cmd_crystal,
    "series": _cmd_series,
    "basic": _cmd_basic,
    "plancherel": _cmd_plancherel,
    "check": _cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb == "list" or not args.datum:
        _emit("".join(f"{n}\n" for n in catalog_names()), args.output)
        return EXIT_OK
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            d = load_datum(args.datum)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except (DatumLoadError, RootDatumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.verb != "validate":
        viol = validate(d)
        if viol:
            for v in viol:
                print(f"invalid datum: {v}", file=sys.stderr)
            return EXIT_INVALID
    try:
        return COMMANDS[args.verb](d, args)
    except (XCrystalError, CrystalError, PoleError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
