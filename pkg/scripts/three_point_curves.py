"""Compare MLS, LOGMLS and LOG eigenvalue curves on a three-point 1D data set."""

import argparse
import csv
import sys

from tensorp.verify import three_point_curves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-o", "--output", help="CSV path (default: stdout)")
    args = ap.parse_args()
    cur = three_point_curves()
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.writer(fh)
    w.writerow(["x", "MLS", "LOGMLS", "LOG"])
    for row in zip(cur["x"], cur["MLS"], cur["LOGMLS"], cur["LOG"]):
        w.writerow([f"{v:.10g}" for v in row])
    print(f"min MLS = {cur['MLS'].min():.4g}, min LOGMLS = {cur['LOGMLS'].min():.4g}", file=sys.stderr)


if __name__ == "__main__":
    main()
