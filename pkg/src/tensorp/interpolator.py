"""Tensor interpolation pipeline.

Each data tensor is split as ``T = R Q^T diag(lam) Q``. The rotation parts
``R`` and ``Q`` are interpolated on SO(3), the eigenvalues separately, and
the result is reassembled at the interpolation point.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decomposition import (
    ByMagnitude,
    TensorDecomposition,
    assign_and_orient,
    distance_order,
    nearest_index,
    polar_decompose,
    symmetric_eigen,
    DEGENERACY_TOL,
)
from .eigen_field import interpolate_eigen_LOG, interpolate_eigen_LOGMLS, interpolate_eigen_MLS
from .errors import DegeneratePrimary, EmptyDataSet, NotSymmetric
from .rotation_field import interpolate_rotation_Q, interpolate_rotation_R
from .wls import PolynomialBasis, auto_basis, default_c, fit_basis, normalized_weights

ROTATION_SCHEMES = ("R", "Q")
EIGEN_SCHEMES = ("LOG", "MLS", "LOGMLS")


@dataclass(frozen=True)
class DataPoint:
    position: np.ndarray
    tensor: np.ndarray

    @classmethod
    def make(cls, position, tensor) -> "DataPoint":
        pos = np.zeros(3)
        p = np.asarray(position, dtype=float).ravel()
        pos[: len(p)] = p
        T = np.asarray(tensor, dtype=float)
        if T.shape == (2, 2):
            T = embed_2d(T)
        return cls(pos, T)


def embed_2d(T2) -> np.ndarray:
    """Place a 2x2 tensor in the upper-left block of a 3x3 with a unit third axis."""
    T = np.eye(3)
    T[:2, :2] = np.asarray(T2, dtype=float)
    return T


@dataclass(frozen=True)
class SchemeConfig:
    """Interpolation scheme.

    ``basis=None`` picks a quadratic basis over the axes the data spans and
    lowers its order if the neighborhood is too small. ``c=None`` uses
    ``1 / max |x_j - x_p|^2``. ``reference_index`` freezes the reference point
    instead of taking the nearest one per interpolation point.
    """

    rotation: str = "R"
    eigen: str = "LOGMLS"
    basis: PolynomialBasis | None = None
    c: float | None = None
    assignment: object = field(default_factory=ByMagnitude)
    symmetric: bool = False
    reference_index: int | None = None

    def __post_init__(self):
        if self.rotation not in ROTATION_SCHEMES:
            raise ValueError(f"rotation scheme must be one of {ROTATION_SCHEMES}")
        if self.eigen not in EIGEN_SCHEMES:
            raise ValueError(f"eigenvalue scheme must be one of {EIGEN_SCHEMES}")

    @property
    def name(self) -> str:
        return f"{self.rotation}-{self.eigen}"

    @classmethod
    def from_name(cls, name: str, **kwargs) -> "SchemeConfig":
        """Build from a tag such as ``"r-logmls"`` or ``"Q-LOG"``."""
        rot, _, eig = name.upper().partition("-")
        return cls(rotation=rot, eigen=eig, **kwargs)


@dataclass
class InterpolationResult:
    T: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    lam: np.ndarray
    weights: np.ndarray
    reference_index: int
    swa_iterations: dict = field(default_factory=dict)
    basis: PolynomialBasis | None = None

    @property
    def U(self) -> np.ndarray:
        return self.Q.T @ np.diag(self.lam) @ self.Q


@dataclass
class PointFailure:
    """Placeholder in a field result for an interpolation point that raised."""

    index: int
    position: np.ndarray
    error: Exception


def _decompose(T, symmetric: bool) -> TensorDecomposition:
    if not symmetric:
        return polar_decompose(T)
    T = np.asarray(T, dtype=float)
    if np.linalg.norm(T - T.T) > 1e-10 * max(1.0, np.linalg.norm(T)):
        raise NotSymmetric("symmetric mode needs symmetric input tensors")
    lam, Q = symmetric_eigen(T)
    return TensorDecomposition(R=np.eye(3), Q=Q, lam=lam)


def _interpolate_rotation(mats, points, x_p, config, basis, c, ref, weights):
    if config.rotation == "R":
        return interpolate_rotation_R(mats, points, x_p, basis, c, reference_index=ref, weights=weights), 0
    return interpolate_rotation_Q(mats, points, x_p, c, reference_index=ref, weights=weights, return_iterations=True)


def interpolate_tensor(data, x_p, config: SchemeConfig | None = None) -> InterpolationResult:
    """Interpolate a tensor at ``x_p`` from scattered ``DataPoint``s."""
    config = SchemeConfig() if config is None else config
    if len(data) == 0:
        raise EmptyDataSet("no data points")
    x_p = np.asarray(x_p, dtype=float)
    points = np.array([d.position for d in data], dtype=float)
    n = len(data)

    decomps = [_decompose(d.tensor, config.symmetric) for d in data]
    ref = nearest_index(points, x_p) if config.reference_index is None else config.reference_index
    lam_ref = decomps[ref].lam
    if abs(lam_ref[0] - lam_ref[1]) < DEGENERACY_TOL * abs(lam_ref[0]):
        warnings.warn("reference tensor has a repeated largest eigenvalue", DegeneratePrimary, stacklevel=2)
    decomps = assign_and_orient(decomps, ref, config.assignment, order=distance_order(points, x_p))

    c = default_c(points, x_p) if config.c is None else float(config.c)
    weights = normalized_weights(points, x_p, c)

    basis = None
    if config.rotation == "R" or config.eigen != "LOG":
        basis = auto_basis(points) if config.basis is None else config.basis
        basis = fit_basis(basis, n)

    iters = {}
    if config.symmetric:
        R_p = np.eye(3)
    else:
        R_p, iters["R"] = _interpolate_rotation([d.R for d in decomps], points, x_p, config, basis, c, ref, weights)
    Q_p, iters["Q"] = _interpolate_rotation([d.Q for d in decomps], points, x_p, config, basis, c, ref, weights)

    lams = np.array([d.lam for d in decomps])
    if config.eigen == "LOG":
        lam_p = interpolate_eigen_LOG(lams, points, x_p, c, weights=weights)
    elif config.eigen == "MLS":
        lam_p = interpolate_eigen_MLS(lams, points, x_p, basis, c, weights=weights)
    else:
        lam_p = interpolate_eigen_LOGMLS(lams, points, x_p, basis, c, weights=weights)

    U_p = Q_p.T @ np.diag(lam_p) @ Q_p
    T_p = R_p @ U_p
    if config.symmetric:
        T_p = 0.5 * (T_p + T_p.T)
    return InterpolationResult(
        T=T_p, R=R_p, Q=Q_p, lam=lam_p, weights=weights, reference_index=ref,
        swa_iterations=iters if config.rotation == "Q" else {}, basis=basis,
    )


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("TENSORP_THREADS", "1")))
    except ValueError:
        return 1


def interpolate_field(data, grid, config: SchemeConfig | None = None) -> list:
    """Interpolate at every grid point, in grid order.

    A point that raises yields a :class:`PointFailure` instead of stopping the
    whole field. ``TENSORP_THREADS`` sets the worker count (default 1).
    """
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise EmptyDataSet("empty interpolation grid")

    def one(i):
        try:
            return interpolate_tensor(data, grid[i], config)
        except Exception as exc:  # collected per point, reported by the caller
            return PointFailure(i, grid[i], exc)

    workers = _thread_count()
    if workers == 1:
        return [one(i) for i in range(len(grid))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(len(grid))))
