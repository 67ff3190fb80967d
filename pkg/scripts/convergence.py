"""Beam convergence study: error per level, fitted slopes, optional CSV export."""

import argparse
import warnings

from tensorp.beam import run_convergence


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, choices=[4, 8], nargs="+", default=[4, 8])
    ap.add_argument("--csv", help="prefix for per-run CSV files, e.g. out/conv")
    args = ap.parse_args()
    warnings.simplefilter("ignore")
    for n in args.points:
        run = run_convergence(n)
        print(f"{n}-point layout, slopes fitted over levels {run.fit_levels}")
        for (scheme, qty), slope in sorted(run.slopes.items()):
            # a nan slope means the error is zero at every level
            text = f"{slope:6.3f}" if slope == slope else " exact"
            print(f"  {scheme:>9} {qty:>5}: {text}")
        if args.csv:
            run.to_csv(f"{args.csv}_{n}pt.csv")


if __name__ == "__main__":
    main()
