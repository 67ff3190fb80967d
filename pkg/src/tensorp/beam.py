"""Planar curved-beam benchmark with an analytic deformation gradient.

The beam occupies ``[0, L] x [-H/2, H/2]``. Curvature, shear and axial strain
are linear in the arc length ``s1``, so the centerline rotation angle has a
closed form.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from .decomposition import ByMaterialDirection, assign_and_orient, polar_decompose
from .errors import OutOfDomain
from .interpolator import DataPoint, SchemeConfig, interpolate_tensor
from .wls import PolynomialBasis

SCHEMES = ("R-LOG", "Q-LOG", "R-MLS", "Q-MLS", "R-LOGMLS", "Q-LOGMLS")


@dataclass(frozen=True)
class BeamConfig:
    """Beam geometry and strain fields ``f(s1) = f0 + f1 * s1``."""

    L: float = 1.0
    H: float = 0.1
    curvature: tuple = (np.pi, 0.0)
    shear: tuple = (0.0, 0.0)
    axial: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not (self.H > 0 and self.L > 0):
            raise ValueError("beam length and height must be positive")

    def angle(self, s1: float) -> float:
        k0, k1 = self.curvature
        return k0 * s1 + 0.5 * k1 * s1 * s1

    @staticmethod
    def _lin(coef, s1):
        return coef[0] + coef[1] * s1


def table2_config() -> BeamConfig:
    return BeamConfig(L=1.0, H=0.1, curvature=(np.pi, 0.0))


def convergence_config() -> BeamConfig:
    return BeamConfig(L=1.0, H=0.1, curvature=(0.0, 0.15), shear=(0.0, 0.15), axial=(0.0, 0.15))


def beam_deformation_gradient(s1: float, s2: float, config: BeamConfig) -> np.ndarray:
    """``F = [(1 - k s2) g1 + gamma] (x) e1 + g2 (x) e2`` with a unit third axis."""
    tol = 1e-12 * max(config.L, config.H)
    if not (-tol <= s1 <= config.L + tol and abs(s2) <= 0.5 * config.H + tol):
        raise OutOfDomain(f"({s1}, {s2}) lies outside the beam")
    phi = config.angle(s1)
    g1 = np.array([np.cos(phi), np.sin(phi), 0.0])
    g2 = np.array([-np.sin(phi), np.cos(phi), 0.0])
    k = config._lin(config.curvature, s1)
    gamma = config._lin(config.shear, s1) * g1 + config._lin(config.axial, s1) * g2
    F = np.zeros((3, 3))
    F[:, 0] = (1.0 - k * s2) * g1 + gamma
    F[:, 1] = g2
    F[2, 2] = 1.0
    return F


def corner_points(center, width: float, height: float, edge_midpoints: bool = False) -> np.ndarray:
    """Corners of a rectangle in the order (+,+), (-,+), (-,-), (+,-), then edge midpoints."""
    cx, cy = center
    a, b = 0.5 * width, 0.5 * height
    pts = [(cx + a, cy + b), (cx - a, cy + b), (cx - a, cy - b), (cx + a, cy - b)]
    if edge_midpoints:
        pts += [(cx, cy + b), (cx - a, cy), (cx, cy - b), (cx + a, cy)]
    return np.array([(x, y, 0.0) for x, y in pts])


def beam_data(points, config: BeamConfig) -> list[DataPoint]:
    return [DataPoint(np.asarray(p, float), beam_deformation_gradient(p[0], p[1], config)) for p in points]


def euclidean_average(data, weights) -> np.ndarray:
    return sum(w * d.tensor for w, d in zip(weights, data))


def run_table2(config: BeamConfig | None = None) -> dict:
    """Upper-left 2x2 blocks of F at the beam center for the proposed schemes, E, and the analytic value."""
    config = table2_config() if config is None else config
    pts = corner_points((0.5 * config.L, 0.0), config.L, config.H)
    data = beam_data(pts, config)
    x_p = np.array([0.5 * config.L, 0.0, 0.0])
    basis = PolynomialBasis("bilinear2d", (0, 1))
    out = {"analytic": beam_deformation_gradient(0.5 * config.L, 0.0, config)[:2, :2]}
    for name in SCHEMES:
        cfg = SchemeConfig.from_name(name, basis=basis, assignment=ByMaterialDirection())
        out[name] = interpolate_tensor(data, x_p, cfg).T[:2, :2]
    res = interpolate_tensor(data, x_p, SchemeConfig.from_name("R-LOG", basis=basis))
    out["E"] = euclidean_average(data, res.weights)[:2, :2]
    return out


def _analytic_parts(F, assignment):
    """R, Q, lam of the analytic tensor with eigenpairs ordered like the interpolants."""
    d = assign_and_orient([polar_decompose(F)], 0, assignment)[0]
    return d.R, d.Q, d.lam, d.U


@dataclass
class ConvergenceRun:
    """Errors per level for each scheme and quantity, with fitted log-log slopes."""

    h: np.ndarray
    errors: dict = field(default_factory=dict)  # (scheme, quantity) -> array over levels
    slopes: dict = field(default_factory=dict)
    fit_levels: tuple = (3, 4, 5, 6, 7)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["scheme", "quantity", "h", "error"])
            for (scheme, qty), errs in self.errors.items():
                for h, e in zip(self.h, errs):
                    w.writerow([scheme, qty, repr(float(h)), repr(float(e))])


def loglog_slope(h, err) -> float:
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])


def run_convergence(
    n_points: int = 4,
    config: BeamConfig | None = None,
    levels=range(1, 8),
    fit_levels=(3, 4, 5, 6, 7),
    schemes=SCHEMES,
) -> ConvergenceRun:
    """Shrink a rectangle around the beam center by halves and record interpolation errors.

    Four points use the bilinear basis; eight points (corners plus edge
    midpoints) use the 8-term quadratic basis.
    """
    if n_points not in (4, 8):
        raise ValueError("n_points must be 4 or 8")
    config = convergence_config() if config is None else config
    basis = PolynomialBasis("bilinear2d" if n_points == 4 else "quadratic2d", (0, 1))
    assignment = ByMaterialDirection()
    center = (0.5 * config.L, 0.0)
    x_p = np.array([center[0], center[1], 0.0])
    F_ana = beam_deformation_gradient(*center, config)
    R_a, Q_a, lam_a, U_a = _analytic_parts(F_ana, assignment)

    levels = list(levels)
    h = np.array([config.L * 2.0**-i for i in levels])
    run = ConvergenceRun(h=h, fit_levels=tuple(fit_levels))
    cfgs = {s: SchemeConfig.from_name(s, basis=basis, assignment=assignment) for s in schemes}
    for s in schemes:
        for q in ("F", "R", "Q", "U", "lam1", "lam2", "lam3"):
            run.errors[(s, q)] = np.zeros(len(levels))
    for li, i in enumerate(levels):
        scale = 2.0**-i
        pts = corner_points(center, config.L * scale, config.H * scale, edge_midpoints=n_points == 8)
        data = beam_data(pts, config)
        for s in schemes:
            r = interpolate_tensor(data, x_p, cfgs[s])
            e = run.errors
            e[(s, "F")][li] = np.linalg.norm(r.T - F_ana)
            e[(s, "R")][li] = np.linalg.norm(r.R - R_a)
            e[(s, "Q")][li] = np.linalg.norm(r.Q - Q_a)
            e[(s, "U")][li] = np.linalg.norm(r.U - U_a)
            for k in range(3):
                e[(s, f"lam{k + 1}")][li] = abs(r.lam[k] - lam_a[k])
    mask = np.isin(levels, fit_levels)
    for key, err in run.errors.items():
        if np.all(err[mask] > 0):
            run.slopes[key] = loglog_slope(h[mask], err[mask])
        else:
            run.slopes[key] = float("nan")
    return run


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0
