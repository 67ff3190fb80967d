"""Acceptance checks shared by the test suite and ``tensorp verify``."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import so3
from .baselines import BASELINES, objectivity_deviation, orientation_cosine
from .beam import SCHEMES, run_convergence, run_table2
from .eigen_field import interpolate_eigen_LOG, interpolate_eigen_LOGMLS, interpolate_eigen_MLS, weighted_log_average
from .interpolator import DataPoint, SchemeConfig, interpolate_field, interpolate_tensor
from .rotation_field import interpolate_rotation_Q
from .wls import PolynomialBasis, default_c, normalized_weights


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.seconds:.2f} s)"

    def report(self) -> str:
        return "\n".join([self.line()] + [f"    {d}" for d in self.details])


class _Collector:
    def __init__(self, name):
        self.result = CheckResult(name, True)
        self.t0 = time.perf_counter()

    def check(self, ok: bool, text: str):
        self.result.passed &= bool(ok)
        self.result.details.append(f"{'ok ' if ok else 'BAD'} {text}")

    def done(self, max_seconds: float | None = None) -> CheckResult:
        self.result.seconds = time.perf_counter() - self.t0
        if max_seconds is not None:
            self.check(self.result.seconds < max_seconds, f"runtime {self.result.seconds:.3f} s < {max_seconds} s")
        return self.result


def planar_tensor(eigenvalues, angle) -> np.ndarray:
    """SPD tensor whose primary eigenvector makes ``angle`` with e1 in the x-y plane."""
    R = so3.axis_rotation(2, angle)
    return R @ np.diag(eigenvalues) @ R.T


def random_rotation_near(rng, scale):
    v = rng.normal(size=3)
    return so3.exp_so3(scale * v / np.linalg.norm(v) * rng.uniform(0, 1))


def random_tensor(rng) -> np.ndarray:
    """Invertible tensor with positive determinant: random rotation times random SPD stretch."""
    lam = np.exp(rng.uniform(-1.0, 1.5, size=3))
    Q = so3.random_rotation(rng)
    return so3.random_rotation(rng) @ Q.T @ np.diag(lam) @ Q


def random_dataset(rng, n=None):
    n = int(rng.integers(10, 15)) if n is None else n
    pts = rng.uniform(-1.0, 1.0, size=(n, 3))
    data = [DataPoint(p, random_tensor(rng)) for p in pts]
    return data, rng.uniform(-0.8, 0.8, size=3)


# 1
def check_table2() -> CheckResult:
    c = _Collector("1 beam midpoint deformation gradient")
    with warnings.catch_warnings():
        # corner stretches have a repeated unit eigenvalue; the material assignment resolves it
        warnings.simplefilter("ignore")
        out = run_table2()
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    for name in ("R-MLS", "Q-MLS"):
        err = np.abs(out[name] - rot).max()
        c.check(err <= 1e-9, f"{name} block {out[name].round(12).tolist()} max dev {err:.2e} <= 1e-9")
    for name in ("R-LOG", "Q-LOG", "R-LOGMLS", "Q-LOGMLS"):
        blk = out[name]
        val = blk[1, 0]
        rest = np.abs(blk - np.array([[0.0, -1.0], [val, 0.0]])).max()
        c.check(0.983 <= val <= 0.993 and rest <= 1e-9, f"{name} c = {val:.6f} in [0.983, 0.993], other entries dev {rest:.2e}")
    err = np.abs(out["E"]).max()
    c.check(err <= 1e-12, f"E block max |entry| {err:.2e} <= 1e-12")
    return c.done(max_seconds=1.0)


# 2
def check_convergence() -> CheckResult:
    c = _Collector("2 convergence orders (beam, levels 3..7)")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        four = run_convergence(4)
        eight = run_convergence(8)
    for s in SCHEMES:
        k = four.slopes[(s, "F")]
        c.check(abs(k - 2.0) <= 0.15, f"4-point {s}: slope(F) = {k:.3f}, expected 2.0 +- 0.15")
    for s in ("R-MLS", "R-LOGMLS"):
        k = eight.slopes[(s, "F")]
        c.check(abs(k - 3.0) <= 0.2, f"8-point {s}: slope(F) = {k:.3f}, expected 3.0 +- 0.2")
    for s in ("Q-LOG", "Q-MLS", "Q-LOGMLS", "R-LOG"):
        k = eight.slopes[(s, "F")]
        c.check(abs(k - 2.0) <= 0.2, f"8-point {s}: slope(F) = {k:.3f}, expected 2.0 +- 0.2")
    return c.done(max_seconds=10.0)


def four_tensor_setup():
    T123 = planar_tensor((7.5, 1.25, 1.0), 0.99 * np.pi / 2)
    T4 = planar_tensor((10.0, 3.0, 1.0), 0.0)
    pts = [(5.0, 5.0, 0.0), (-5.0, 5.0, 0.0), (-5.0, -5.0, 0.0), (5.0, -5.0, 0.0)]
    return pts, [T123, T123, T123, T4]


def objectivity_rotation() -> np.ndarray:
    return so3.axis_rotation(2, np.pi / 3) @ so3.axis_rotation(1, np.pi / 6) @ so3.axis_rotation(0, np.pi / 12)


# 3
def check_objectivity() -> CheckResult:
    c = _Collector("3 objectivity on the four-tensor setup")
    pts, tensors = four_tensor_setup()
    x_p = np.zeros(3)
    M = objectivity_rotation()
    w = normalized_weights(pts, x_p, default_c(pts, x_p))
    for s in SCHEMES:
        cfg = SchemeConfig.from_name(s)

        def run(Ts, cfg=cfg):
            return interpolate_tensor([DataPoint.make(p, T) for p, T in zip(pts, Ts)], x_p, cfg).T

        dev = objectivity_deviation(run, tensors, M)
        c.check(dev <= 1e-6, f"{s}: |theta_n| = {dev:.3e} <= 1e-6")
    for name, fn in BASELINES.items():
        dev = objectivity_deviation(lambda Ts, fn=fn: fn(Ts, w), tensors, M)
        if name == "E":
            c.check(dev <= 1e-6, f"{name}: |theta_n| = {dev:.3e} <= 1e-6")
        else:
            c.check(dev > 1e-3, f"{name}: |theta_n| = {dev:.3e} > 1e-3")
    return c.done(max_seconds=1.0)


# 4
def check_scaling(n_sets: int = 100, seed: int = 0) -> CheckResult:
    c = _Collector(f"4 scaling invariance ({n_sets} datasets per scheme)")
    rng = np.random.default_rng(seed)
    sets = [random_dataset(rng) for _ in range(n_sets)]
    for s in SCHEMES:
        cfg = SchemeConfig.from_name(s)
        worst = 0.0
        for data, x_p in sets:
            base = interpolate_tensor(data, x_p, cfg).T
            for alpha in (1e-3, 1e3):
                scaled = [DataPoint(d.position, alpha * d.tensor) for d in data]
                out = interpolate_tensor(scaled, x_p, cfg).T
                worst = max(worst, np.linalg.norm(out - alpha * base) / (alpha * np.linalg.norm(base)))
        c.check(worst <= 1e-9, f"{s}: max relative deviation {worst:.2e} <= 1e-9")
    return c.done()


# 5
def check_gm_bound(n_sets: int = 10_000, seed: int = 1) -> CheckResult:
    c = _Collector(f"5 geometric-mean bound ({n_sets} datasets)")
    rng = np.random.default_rng(seed)
    bad = 0
    boundary = 0
    for k in range(n_sets):
        n = int(rng.integers(1, 9))
        vals = np.exp(rng.uniform(-5, 5, size=(n, 3)))
        kind = k % 4
        if kind == 1:
            vals[:] = vals[0]  # all equal: result must hit both bounds
            boundary += 1
        elif kind == 2:
            vals[:, 0] = vals[0, 0]  # one constant channel
            boundary += 1
        w = rng.uniform(0.0, 1.0, size=n) + 1e-12
        if kind == 3:
            w[0] = 1e12  # weight concentrated on one point
        w = w / w.sum()
        out = weighted_log_average(vals, w)
        if np.any(out < vals.min(axis=0)) or np.any(out > vals.max(axis=0)):
            bad += 1
    c.check(bad == 0, f"{bad} of {n_sets} datasets left [min, max] ({boundary} boundary cases)")
    return c.done()


def three_point_curves(xs=None):
    """MLS, LOGMLS and LOG curves through the three-point 1D data set."""
    pts = np.array([[1.0, 0, 0], [2.0, 0, 0], [3.0, 0, 0]])
    vals = np.array([0.1, 0.1, 1.0])[:, None]
    basis = PolynomialBasis("quadratic1d", (0,))
    xs = np.linspace(1.0, 3.0, 401) if xs is None else np.asarray(xs, float)
    out = {"x": xs, "MLS": [], "LOGMLS": [], "LOG": []}
    for x in xs:
        x_p = np.array([x, 0.0, 0.0])
        cp = default_c(pts, x_p)
        out["MLS"].append(interpolate_eigen_MLS(vals, pts, x_p, basis, cp)[0])
        out["LOGMLS"].append(interpolate_eigen_LOGMLS(vals, pts, x_p, basis, cp)[0])
        out["LOG"].append(interpolate_eigen_LOG(vals, pts, x_p, cp)[0])
    return {k: np.asarray(v) for k, v in out.items()}


# 6
def check_three_point_curves() -> CheckResult:
    c = _Collector("6 LOGMLS positivity and 1D three-point curves")
    cur = three_point_curves()
    x = cur["x"]
    seg = (x >= 1.0) & (x <= 2.0)
    mn = cur["MLS"][seg].min()
    c.check(mn < 0.0, f"MLS minimum on [1, 2] = {mn:.5f} < 0")
    c.check(cur["LOGMLS"].min() > 0.0, f"LOGMLS minimum on [1, 3] = {cur['LOGMLS'].min():.5f} > 0")
    c.check(cur["LOG"].min() > 0.0, f"LOG minimum on [1, 3] = {cur['LOG'].min():.5f} > 0")
    lo, hi = cur["LOG"].min(), cur["LOG"].max()
    c.check(0.1 <= lo and hi <= 1.0, f"LOG range [{lo:.5f}, {hi:.5f}] within [0.1, 1.0]")
    at = three_point_curves([1.0, 2.0, 3.0])["LOGMLS"]
    err = np.abs(at - np.array([0.1, 0.1, 1.0])).max()
    c.check(err <= 1e-9, f"LOGMLS passes through the data, max error {err:.2e} <= 1e-9")
    return c.done()


# 7
def check_geodesic(n_pairs: int = 1000, seed: int = 2) -> CheckResult:
    c = _Collector(f"7 geodesic identity ({n_pairs} quaternion pairs)")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_pairs):
        q1 = rng.normal(size=4)
        q2 = rng.normal(size=4)
        q1 /= np.linalg.norm(q1)
        q2 /= np.linalg.norm(q2)
        if q1 @ q2 < 0.0:
            q2 = -q2
        via_log = so3.geodesic_distance_s3(q1, q2)
        via_dot = so3.geodesic_distance_s3_dot(q1, q2)
        R21 = so3.relative_rotation(so3.rotation_from_quat(q1), so3.rotation_from_quat(q2))
        via_mat = 0.5 * np.linalg.norm(so3.log_so3(R21, tol=1e-9))
        worst = max(worst, abs(via_log - via_dot), abs(via_log - via_mat), abs(via_dot - via_mat))
    c.check(worst <= 1e-12, f"max pairwise disagreement {worst:.2e} <= 1e-12")
    return c.done()


# 8
def check_structure(n_sets: int = 1000, seed: int = 3) -> CheckResult:
    c = _Collector(f"8 structure preservation ({n_sets} datasets x 6 schemes)")
    rng = np.random.default_rng(seed)
    sets = [random_dataset(rng) for _ in range(n_sets)]
    for s in SCHEMES:
        cfg = SchemeConfig.from_name(s)
        orth = det = recon = 0.0
        neg = 0
        for data, x_p in sets:
            r = interpolate_tensor(data, x_p, cfg)
            for M in (r.R, r.Q):
                orth = max(orth, np.linalg.norm(M.T @ M - np.eye(3)))
                det = max(det, abs(np.linalg.det(M) - 1.0))
            recon = max(recon, np.linalg.norm(r.T - r.R @ r.Q.T @ np.diag(r.lam) @ r.Q) / np.linalg.norm(r.T))
            if cfg.eigen != "MLS" and np.any(r.lam <= 0.0):
                neg += 1
        ok = orth <= 1e-10 and det <= 1e-10 and recon <= 1e-12 and neg == 0
        c.check(ok, f"{s}: |R^T R - I| {orth:.1e}, |det - 1| {det:.1e}, reconstruction {recon:.1e}, non-positive lam sets {neg}")
    return c.done()


def two_tensor_setup():
    pts = [(-5.0, 0.0, 0.0), (5.0, 0.0, 0.0)]
    tensors = [planar_tensor((10.0, 1.0, 1.0), np.pi / 4), planar_tensor((20.0, 4.0, 1.0), 0.99 * (-np.pi / 4))]
    return pts, tensors


def _monotone(v, rtol=1e-12) -> bool:
    d = np.diff(v)
    tol = rtol * np.abs(v).max()
    return bool(np.all(d >= -tol) or np.all(d <= tol))


# 9
def check_two_tensor(n_grid: int = 101) -> CheckResult:
    c = _Collector("9 two-tensor midpoint orientation and determinant monotonicity")
    pts, tensors = two_tensor_setup()
    data = [DataPoint.make(p, T) for p, T in zip(pts, tensors)]
    grid = np.array([[x, 0.0, 0.0] for x in np.linspace(-5.0, 5.0, n_grid)])
    target = 1.0 / np.sqrt(2.0)
    for s in SCHEMES:
        cfg = SchemeConfig.from_name(s)
        mid = interpolate_tensor(data, np.zeros(3), cfg).T
        cos = orientation_cosine(tensors[0], mid)
        c.check(abs(cos - target) <= 0.02, f"{s}: midpoint cos = {cos:.4f}, expected 1/sqrt(2) +- 0.02")
        dets = [np.linalg.det(r.T) for r in interpolate_field(data, grid, cfg)]
        c.check(_monotone(dets), f"{s}: determinant monotone along the line")
    for name, fn in BASELINES.items():
        dets = []
        for g in grid:
            w = normalized_weights(pts, g, default_c(pts, g))
            dets.append(np.linalg.det(fn(tensors, w)))
        mono = _monotone(dets)
        if name == "E":
            c.result.details.append(f"info E: determinant monotone = {mono} (not required)")
        else:
            c.check(mono, f"{name}: determinant monotone along the line")
    return c.done()


# 10
def check_swa_slerp(n_pairs: int = 50, seed: int = 4) -> CheckResult:
    c = _Collector("10 spherical average of two rotations equals slerp")
    rng = np.random.default_rng(seed)
    pairs = [(np.eye(3), so3.axis_rotation(2, np.pi / 2))]
    pairs += [(so3.random_rotation(rng), so3.random_rotation(rng)) for _ in range(n_pairs)]
    pts = np.array([[0.0, 0, 0], [1.0, 0, 0]])
    worst = 0.0
    for R1, R2 in pairs:
        q1 = so3.quat_from_rotation(R1)
        q2 = so3.quat_from_rotation(R2)
        if q1 @ q2 < 0.0:
            q2 = -q2
        for w in np.arange(1, 10) / 10:
            swa = interpolate_rotation_Q([R1, R2], pts, pts[0], 0.0, reference_index=0, weights=[1.0 - w, w])
            ref = so3.rotation_from_quat(so3.slerp(q1, q2, w))
            worst = max(worst, np.linalg.norm(swa - ref))
    c.check(worst <= 1e-9, f"max Frobenius deviation over {len(pairs)} pairs x 9 weights: {worst:.2e} <= 1e-9")
    return c.done()


CRITERIA = {
    1: check_table2,
    2: check_convergence,
    3: check_objectivity,
    4: check_scaling,
    5: check_gm_bound,
    6: check_three_point_curves,
    7: check_geodesic,
    8: check_structure,
    9: check_two_tensor,
    10: check_swa_slerp,
}

SUITES = {
    "table2": (1,),
    "convergence": (2,),
    "invariance": (3, 4, 7, 10),
    "bounds": (5, 6, 8, 9),
}


def run_suite(name: str, seed: int | None = None) -> list[CheckResult]:
    out = []
    for k in SUITES[name]:
        fn = CRITERIA[k]
        if seed is not None and "seed" in fn.__code__.co_varnames:
            out.append(fn(seed=seed))
        else:
            out.append(fn())
    return out
