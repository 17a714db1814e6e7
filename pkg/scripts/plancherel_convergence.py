"""Pointwise error of the truncated asymptotics against the closed-form density, by bound."""

import argparse

from spherical_ic import build_xcrystal, load_datum
from spherical_ic.harmonic import pointwise_errors, quadrature_norm, random_points, tail_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("data", nargs="*", default=["hecke-gl2", "nfold(2)"])
    ap.add_argument("--bounds", type=int, nargs="+", default=[6, 12, 18, 24, 30])
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--q", type=float, default=4.0)
    ap.add_argument("--grid", type=int, default=64)
    args = ap.parse_args()

    print("datum,bound,max_pointwise,tail_majorant,quad_minus_parseval")
    for name in args.data:
        x = build_xcrystal(load_datum(name))
        pts = random_points(x.datum.rank, args.samples, args.seed, args.q)
        for b in args.bounds:
            err = max(pointwise_errors(x, b, pts))
            tail = tail_bound(x, b, args.q)
            quad = quadrature_norm(x, b, args.grid, args.q).difference
            print(f"{name},{b},{err:.3e},{tail:.3e},{quad:.1e}")


if __name__ == "__main__":
    main()
