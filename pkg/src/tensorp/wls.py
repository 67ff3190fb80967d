"""Weighted / moving least squares: polynomial bases, exponential weights, normal equations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BasisDegraded, EmptyDataSet, SingularMoment

MAX_CONDITION = 1e12

# exponent tuples per basis kind, written for up to three local axes
_EXPONENTS = {
    "constant": [()],
    "linear1d": [(0,), (1,)],
    "quadratic1d": [(0,), (1,), (2,)],
    "bilinear2d": [(0, 0), (1, 0), (0, 1), (1, 1)],
    # 8-term 2D basis: 1, x, y, x^2, y^2, xy, x^2 y, x y^2 (no x^2 y^2)
    "quadratic2d": [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (2, 1), (1, 2)],
    "linear3d": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
    "quadratic3d": [
        (0, 0, 0),
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (2, 0, 0),
        (0, 2, 0),
        (0, 0, 2),
        (1, 1, 0),
        (0, 1, 1),
        (1, 0, 1),
    ],
}

_DIM = {"constant": 0, "linear1d": 1, "quadratic1d": 1, "bilinear2d": 2, "quadratic2d": 2,
        "linear3d": 3, "quadratic3d": 3}

# next lower basis, used when a neighborhood has too few points
_FALLBACK = {
    "quadratic3d": "linear3d",
    "linear3d": "constant",
    "quadratic2d": "bilinear2d",
    "bilinear2d": "linear1d",
    "quadratic1d": "linear1d",
    "linear1d": "constant",
}


@dataclass(frozen=True)
class PolynomialBasis:
    """Monomial basis over selected coordinate axes.

    ``axes`` picks which components of a 3-vector the basis variables are,
    e.g. ``(0, 1)`` for a 2D basis in the x-y plane.
    """

    kind: str = "quadratic3d"
    axes: tuple = (0, 1, 2)

    def __post_init__(self):
        if self.kind not in _EXPONENTS:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        dim = _DIM[self.kind]
        if len(self.axes) < dim:
            raise ValueError(f"basis {self.kind} needs {dim} axes, got {self.axes}")
        object.__setattr__(self, "axes", tuple(int(a) for a in self.axes[:dim]))

    @property
    def size(self) -> int:
        return len(_EXPONENTS[self.kind])

    @property
    def exponents(self) -> np.ndarray:
        e = np.array(_EXPONENTS[self.kind], dtype=int)
        return e.reshape(self.size, len(self.axes))

    def __call__(self, x) -> np.ndarray:
        """Row ``p(x)`` for one point, or one row per point for a 2D input."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return self.design(x[None, :])[0]
        return self.design(x)

    def design(self, x) -> np.ndarray:
        """Matrix with rows ``p(x_j)``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if not self.axes:
            return np.ones((x.shape[0], 1))
        coords = x[:, list(self.axes)]
        return np.prod(coords[:, None, :] ** self.exponents[None, :, :], axis=2)

    def lower(self) -> "PolynomialBasis":
        low = _FALLBACK.get(self.kind)
        if low is None:
            raise ValueError("constant basis cannot be lowered")
        return PolynomialBasis(low, self.axes)


def auto_basis(points, quadratic: bool = True) -> PolynomialBasis:
    """Pick a basis from the axes along which the points actually vary."""
    pts = np.asarray(points, dtype=float)
    spread = np.ptp(pts, axis=0) if len(pts) else np.zeros(3)
    axes = tuple(int(i) for i in np.flatnonzero(spread > 1e-12 * max(1.0, spread.max(initial=0.0))))
    kinds = {0: ("constant", "constant"), 1: ("linear1d", "quadratic1d"),
             2: ("bilinear2d", "quadratic2d"), 3: ("linear3d", "quadratic3d")}
    return PolynomialBasis(kinds[len(axes)][int(quadratic)], axes)


def fit_basis(basis: PolynomialBasis, n_points: int) -> PolynomialBasis:
    """Lower the basis order until ``n_points >= size``, warning if anything changed."""
    b = basis
    while b.size > n_points:
        b = b.lower()
    if b != basis:
        warnings.warn(
            f"{n_points} points cannot support basis {basis.kind}; using {b.kind}",
            BasisDegraded,
            stacklevel=3,
        )
    return b


def default_c(points, x_p) -> float:
    """Weight parameter giving the farthest point relative weight 1/e."""
    d2 = np.sum((np.asarray(points, float) - np.asarray(x_p, float)) ** 2, axis=1)
    m = float(d2.max())
    return 1.0 / m if m > 0.0 else 0.0


def normalized_weights(points, x_p, c: float) -> np.ndarray:
    """``exp(-c |x_j - x_p|^2)`` normalized to sum to one."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise EmptyDataSet("no points to weight")
    if c < 0:
        raise ValueError("weight parameter c must be non-negative")
    d2 = np.sum((pts - np.asarray(x_p, dtype=float)) ** 2, axis=1)
    # shifting by the smallest distance cancels in the normalization and avoids underflow
    w = np.exp(-c * (d2 - d2.min()))
    # keep far points strictly positive instead of letting them underflow to zero
    return np.maximum(w / w.sum(), np.finfo(float).tiny)


def moment_matrix(design: np.ndarray, weights) -> np.ndarray:
    """``sum_j w_j p(x_j)^T p(x_j)``."""
    return design.T @ (np.asarray(weights)[:, None] * design)


def wls_fit(points, values, basis: PolynomialBasis, weights, x_p=None) -> np.ndarray:
    """Coefficients ``a = P^-1 b`` per channel, in the local frame centered at ``x_p``.

    ``values`` has one row per point and one column per channel; the result has
    shape ``(m, channels)``. Each local axis is rescaled by its extent before
    solving so that the conditioning check does not depend on units.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.asarray(values, dtype=float)
    squeeze = vals.ndim == 1
    vals = vals.reshape(len(pts), -1)
    w = np.asarray(weights, dtype=float)
    if x_p is not None:
        pts = pts - np.asarray(x_p, dtype=float)
    m = basis.size
    if len(pts) < m:
        raise SingularMoment(f"{len(pts)} points are fewer than the {m} basis terms")

    scale = np.ones(pts.shape[1])
    for a in basis.axes:
        s = float(np.max(np.abs(pts[:, a])))
        scale[a] = s if s > 0.0 else 1.0
    D = basis.design(pts / scale)
    P = moment_matrix(D, w)
    if not np.all(np.isfinite(P)) or np.linalg.cond(P) > MAX_CONDITION:
        raise SingularMoment("moment matrix is singular or ill-conditioned for this point layout")
    b = D.T @ (w[:, None] * vals)
    a_scaled = np.linalg.solve(P, b)
    a = a_scaled / basis(scale)[:, None]
    return a[:, 0] if squeeze else a


def wls_evaluate(coeffs, basis: PolynomialBasis, x_local=None) -> np.ndarray:
    """Evaluate a fit at a local offset; at the origin this is just the constant term."""
    a = np.asarray(coeffs, dtype=float)
    if x_local is None:
        return a[0]
    return basis(np.asarray(x_local, dtype=float)) @ a
