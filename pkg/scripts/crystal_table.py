"""Summarise the crystal of each catalog datum: summands, plus weights, checks."""

import argparse

from spherical_ic import build_xcrystal, load_datum
from spherical_ic.catalog import catalog_names
from spherical_ic.xcrystal import verify_properties


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("data", nargs="*")
    args = ap.parse_args()
    for name in args.data or catalog_names():
        x = build_xcrystal(load_datum(name))
        rep = verify_properties(x)
        parts = ", ".join(f"{s.kind}:{s.weight}x{s.size}" for s in x.summands)
        print(f"{name}: {len(x.crystal)} elements, plus {sorted(x.plus_weights())}")
        print(f"  summands {parts}")
        print(f"  checks {'ok' if rep.passed else 'FAILED ' + ', '.join(c.name for c in rep.failed())}")


if __name__ == "__main__":
    main()
