"""Command line entry point: ``tensorp {interpolate, verify, decompose}``."""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from .baselines import BASELINES, compute_metrics
from .decomposition import ByMagnitude, ByMaterialDirection, polar_decompose, symmetric_eigen
from .errors import TensorInterpError
from .interpolator import PointFailure, SchemeConfig, interpolate_field
from .io import glyph_row, read_tensor_field, write_glyphs
from .wls import PolynomialBasis, default_c, normalized_weights

PROPOSED = [f"{r}-{e}" for r in ("r", "q") for e in ("log", "mls", "logmls")]
SCHEME_CHOICES = PROPOSED + ["e", "c", "log-e", "log-c"]


def _vec(text: str) -> np.ndarray:
    vals = [float(v) for v in text.split(",")]
    if not 1 <= len(vals) <= 3:
        raise argparse.ArgumentTypeError(f"expected 1 to 3 comma-separated numbers, got {text!r}")
    return np.pad(np.array(vals), (0, 3 - len(vals)))


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:n`` per axis, comma-separated, e.g. ``-5:5:11,-5:5:11``."""
    axes = []
    for part in text.split(","):
        a, b, n = part.split(":")
        axes.append(np.linspace(float(a), float(b), int(n)))
    while len(axes) < 3:
        axes.append(np.array([0.0]))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def parse_assignment(text: str):
    if text == "magnitude":
        return ByMagnitude()
    if text.startswith("material"):
        _, _, dirs = text.partition(":")
        if not dirs:
            return ByMaterialDirection()
        parts = [tuple(_vec(d)) for d in dirs.split("/")]
        if len(parts) == 1:
            d1 = np.array(parts[0])
            # second direction: the coordinate axis least aligned with the first
            e = np.eye(3)[int(np.argmin(np.abs(d1)))]
            parts.append(tuple(e))
        return ByMaterialDirection(tuple(parts[:2]))
    raise argparse.ArgumentTypeError("assignment must be 'magnitude' or 'material[:x,y,z[/x,y,z]]'")


def _metrics(T, lam) -> dict:
    out = {"det": float(np.linalg.det(T)), "trace": float(np.trace(T))}
    if np.all(lam > 0):
        m = compute_metrics(np.diag(lam))
        out.update(FA=m.FA, HA=m.HA)
    return out


def _baseline_rows(name, data, grid, c):
    fn = BASELINES[name.upper()]
    pts = np.array([d.position for d in data])
    tensors = [d.tensor for d in data]
    rows, failures = [], 0
    for x in grid:
        try:
            cp = default_c(pts, x) if c is None else c
            T = fn(tensors, normalized_weights(pts, x, cp))
            lam, Q = symmetric_eigen(T)
            rows.append(glyph_row(x, lam, Q, np.eye(3), _metrics(T, lam)))
        except TensorInterpError as exc:
            failures += 1
            rows.append(glyph_row(x, None, None, None, None, f"{type(exc).__name__}: {exc}"))
    return rows, failures


def cmd_interpolate(args) -> int:
    try:
        data = read_tensor_field(args.input)
    except (OSError, TensorInterpError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if not data:
        print("error: EmptyDataSet: no records in input", file=sys.stderr)
        return 1
    grid = np.vstack(args.at + ([parse_grid(args.grid)] if args.grid else []))
    if grid.size == 0:
        print("error: give --at or --grid", file=sys.stderr)
        return 1

    scheme = args.scheme.lower()
    if scheme in PROPOSED:
        basis = PolynomialBasis(args.basis, tuple(args.axes)) if args.basis else None
        cfg = SchemeConfig.from_name(scheme, basis=basis, c=args.c_param, assignment=args.assign)
        rows, failures = [], 0
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results = interpolate_field(data, grid, cfg)
        for msg in {str(w.message) for w in caught}:
            print(f"warning: {msg}", file=sys.stderr)
        for x, r in zip(grid, results):
            if isinstance(r, PointFailure):
                failures += 1
                status = f"{type(r.error).__name__}: {r.error}"
                print(f"point {r.index} {x.tolist()}: {status}", file=sys.stderr)
                rows.append(glyph_row(x, None, None, None, None, status))
            else:
                rows.append(glyph_row(x, r.lam, r.Q, r.R, _metrics(r.T, r.lam)))
    else:
        rows, failures = _baseline_rows(scheme, data, grid, args.c_param)

    write_glyphs(args.output if args.output != "-" else sys.stdout, rows)
    return 2 if failures else 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite, seed=args.seed)
    for r in results:
        print(r.report())
    return 0 if all(r.passed for r in results) else 1


def cmd_decompose(args) -> int:
    try:
        data = read_tensor_field(args.input)
    except (OSError, TensorInterpError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    status = 0
    np.set_printoptions(precision=10, suppress=True)
    for i, d in enumerate(data):
        print(f"record {i} at {d.position.tolist()}")
        try:
            dec = polar_decompose(d.tensor)
        except TensorInterpError as exc:
            print(f"  {type(exc).__name__}: {exc}")
            status = 2
            continue
        print(f"  lam = {dec.lam}")
        print("  R =\n" + _indent(dec.R))
        print("  Q (rows are eigenvectors) =\n" + _indent(dec.Q))
    return status


def _indent(M) -> str:
    return "\n".join("    " + line for line in np.array2string(M).splitlines())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensorp", description="Objective interpolation of 3x3 tensors.")
    sub = p.add_subparsers(dest="command", required=True)

    pi = sub.add_parser("interpolate", help="interpolate a tensor field file at points")
    pi.add_argument("input")
    pi.add_argument("--at", type=_vec, action="append", default=[], help="x,y,z (repeatable)")
    pi.add_argument("--grid", help="start:stop:n per axis, comma separated")
    pi.add_argument("--scheme", default="r-logmls", choices=SCHEME_CHOICES, type=str.lower)
    pi.add_argument("--basis", choices=["constant", "linear1d", "quadratic1d", "bilinear2d",
                                        "quadratic2d", "linear3d", "quadratic3d"])
    pi.add_argument("--axes", type=int, nargs="+", default=[0, 1, 2], help="coordinate axes of the basis")
    pi.add_argument("--c-param", type=float, default=None, help="weight parameter c (default 1/max d^2)")
    pi.add_argument("--assign", type=parse_assignment, default=ByMagnitude(),
                    help="magnitude | material[:x,y,z[/x,y,z]]")
    pi.add_argument("--output", "-o", default="-")
    pi.set_defaults(func=cmd_interpolate)

    pv = sub.add_parser("verify", help="run an acceptance suite")
    pv.add_argument("--suite", required=True, choices=["invariance", "bounds", "table2", "convergence"])
    pv.add_argument("--seed", type=int, default=None)
    pv.set_defaults(func=cmd_verify)

    pd = sub.add_parser("decompose", help="print R, Q and eigenvalues per record")
    pd.add_argument("input")
    pd.set_defaults(func=cmd_decompose)
    return p


def _join_values(argv):
    """Glue ``--at``/``--grid`` to their value so negative coordinates are not read as flags."""
    out, it = [], iter(argv)
    for a in it:
        if a in ("--at", "--grid"):
            out.append(f"{a}={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_values(argv))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
