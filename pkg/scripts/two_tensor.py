"""Metrics along a line between two anisotropic tensors, for every scheme and baseline."""

import argparse
import csv
import sys
import warnings

import numpy as np

from tensorp.baselines import BASELINES, compute_metrics, orientation_cosine
from tensorp.beam import SCHEMES
from tensorp.interpolator import DataPoint, SchemeConfig, interpolate_tensor
from tensorp.verify import two_tensor_setup
from tensorp.wls import default_c, normalized_weights


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=21, help="samples along the line")
    ap.add_argument("-o", "--output", help="CSV path (default: stdout)")
    args = ap.parse_args()
    warnings.simplefilter("ignore")
    pts, tensors = two_tensor_setup()
    data = [DataPoint.make(p, T) for p, T in zip(pts, tensors)]
    positions = np.array([d.position for d in data])
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.writer(fh)
    w.writerow(["scheme", "x", "det", "trace", "FA", "HA", "cos_primary"])
    for x in np.linspace(-5, 5, args.n):
        x_p = np.array([x, 0.0, 0.0])
        out = {name: interpolate_tensor(data, x_p, SchemeConfig.from_name(name)).T for name in SCHEMES}
        wts = normalized_weights(positions, x_p, default_c(positions, x_p))
        out.update({name: fn([d.tensor for d in data], wts) for name, fn in BASELINES.items()})
        for name, T in out.items():
            m = compute_metrics(T)
            cos = orientation_cosine(T, data[0].tensor)
            w.writerow([name, f"{x:.6g}"] + [f"{v:.10g}" for v in (m.determinant, m.trace, m.FA, m.HA, cos)])


if __name__ == "__main__":
    main()
