"""Polar + spectral decomposition ``T = R Q^T diag(lam) Q`` and eigenframe alignment."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import (
    AmbiguousOrientation,
    NegativeDeterminant,
    NotInvertible,
    NotSymmetric,
)

DEGENERACY_TOL = 1e-9
AMBIGUITY_TOL = 1e-6


@dataclass(frozen=True)
class TensorDecomposition:
    """Right polar decomposition ``T = R U`` with ``U = Q^T diag(lam) Q``.

    Rows of ``Q`` are the unit eigenvectors of ``U``; ``lam[i]`` belongs to row ``i``.
    """

    R: np.ndarray
    Q: np.ndarray
    lam: np.ndarray

    @property
    def U(self) -> np.ndarray:
        return self.Q.T @ np.diag(self.lam) @ self.Q

    def tensor(self) -> np.ndarray:
        return self.R @ self.U


@dataclass(frozen=True)
class ByMagnitude:
    """Eigenpairs are matched across points by decreasing eigenvalue."""


@dataclass(frozen=True)
class ByMaterialDirection:
    """Eigenpairs are matched by their alignment with fixed material directions.

    ``directions`` holds the first two reference directions (for a beam: the
    length direction ``s1`` and the transverse direction ``s2``); the third is
    their cross product.
    """

    directions: tuple = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0))

    def frame(self) -> np.ndarray:
        d1 = np.asarray(self.directions[0], dtype=float)
        d1 = d1 / np.linalg.norm(d1)
        d2 = np.asarray(self.directions[1], dtype=float)
        d2 = d2 - (d2 @ d1) * d1
        d2 = d2 / np.linalg.norm(d2)
        return np.vstack([d1, d2, np.cross(d1, d2)])


def symmetric_eigen(U, tol: float = 1e-10):
    """Eigenvalues in decreasing order and eigenvectors as rows of a proper rotation."""
    U = np.asarray(U, dtype=float)
    scale = max(1.0, float(np.linalg.norm(U)))
    if np.linalg.norm(U - U.T) > tol * scale:
        raise NotSymmetric("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(0.5 * (U + U.T))
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    rows = vecs[:, order].T.copy()
    if np.linalg.det(rows) < 0.0:
        rows[2] *= -1.0
    return vals, rows


def polar_decompose(T) -> TensorDecomposition:
    """Decompose an invertible tensor with positive determinant."""
    T = np.asarray(T, dtype=float)
    if T.shape != (3, 3) or not np.all(np.isfinite(T)):
        raise ValueError("tensor must be a finite 3x3 matrix")
    det = np.linalg.det(T)
    norm = np.linalg.norm(T)
    if norm == 0.0 or abs(det) <= 1e-12 * norm**3:
        raise NotInvertible(f"tensor is singular (det = {det:.3e})")
    if det < 0.0:
        raise NegativeDeterminant(f"det(T) = {det:.6g} < 0")
    mu, Q = symmetric_eigen(T.T @ T)
    lam = np.sqrt(mu)
    U_inv = Q.T @ np.diag(1.0 / lam) @ Q
    R = T @ U_inv
    return TensorDecomposition(R=R, Q=Q, lam=lam)


def _clusters(lam: np.ndarray) -> list[list[int]]:
    """Groups of indices whose eigenvalues coincide within the degeneracy tolerance."""
    tol = DEGENERACY_TOL * max(float(np.max(np.abs(lam))), 1e-300)
    groups: list[list[int]] = []
    for i in range(len(lam)):
        for g in groups:
            if any(abs(lam[i] - lam[j]) < tol for j in g):
                g.append(i)
                break
        else:
            groups.append([i])
    return [g for g in groups if len(g) > 1]


def _procrustes_align(V: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Rotate orthonormal rows ``V`` inside their span to best match ``targets``."""
    M = V @ targets.T
    A, _, Bt = np.linalg.svd(M)
    O = A @ Bt
    return O.T @ V


def _align_degenerate(Q: np.ndarray, lam: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Fix the free basis of repeated eigenvalues by matching ``targets`` rows."""
    Q = Q.copy()
    for g in _clusters(lam):
        Q[g] = _procrustes_align(Q[g], targets[g])
    return Q


def _proper(Q: np.ndarray) -> np.ndarray:
    Q = Q.copy()
    Q[2] = np.cross(Q[0], Q[1])
    return Q / np.linalg.norm(Q, axis=1)[:, None]


def _orient_to(Q: np.ndarray, ref: np.ndarray, warn: bool = True) -> np.ndarray:
    Q = Q.copy()
    for i in range(2):
        d = float(Q[i] @ ref[i])
        if warn and abs(d) < np.sin(AMBIGUITY_TOL):
            warnings.warn(
                f"eigenvector {i + 1} is at pi/2 from the reference; sign choice is ambiguous",
                AmbiguousOrientation,
                stacklevel=3,
            )
        # flip when d(n0, -n) < d(n0, n), i.e. the dot product is negative
        if d < 0.0:
            Q[i] = -Q[i]
    return _proper(Q)


def _material_order(Q: np.ndarray, lam: np.ndarray, frame: np.ndarray):
    """Permute eigenpairs so that row ``i`` is the one closest to ``frame[i]``."""
    Q = _align_degenerate_to_frame(Q, lam, frame)
    remaining = [0, 1, 2]
    order = []
    for d in frame[:2]:
        best = max(remaining, key=lambda i: abs(Q[i] @ d))
        order.append(best)
        remaining.remove(best)
    order.append(remaining[0])
    Q = Q[order]
    lam = lam[order]
    # put each vector on the side of its reference direction before sign alignment
    for i in range(2):
        if Q[i] @ frame[i] < 0.0:
            Q[i] = -Q[i]
    return _proper(Q), lam


def _align_degenerate_to_frame(Q, lam, frame):
    Q = Q.copy()
    for g in _clusters(lam):
        span = Q[g]
        weights = np.linalg.norm(frame @ span.T, axis=1)
        picks = sorted(np.argsort(-weights, kind="stable")[: len(g)])
        Q[g] = _procrustes_align(span, frame[picks])
    return Q


def assign_and_orient(
    decomps: Sequence[TensorDecomposition],
    reference_index: int,
    strategy=None,
    order: Sequence[int] | None = None,
) -> list[TensorDecomposition]:
    """Make eigenframes of a neighborhood consistent with the reference point.

    With :class:`ByMagnitude` rows stay in decreasing eigenvalue order; with
    :class:`ByMaterialDirection` they are permuted to follow the material frame.
    The first two eigenvectors of every point are then sign-flipped towards the
    reference ones and the third is rebuilt as their cross product.

    ``order`` lists point indices by increasing distance from the evaluation
    point. It is used only when the reference itself has repeated eigenvalues:
    its free basis is then pinned to the nearest point that resolves it.
    """
    if not decomps:
        raise ValueError("empty neighborhood")
    n = len(decomps)
    if not 0 <= reference_index < n:
        raise IndexError("reference index out of range")
    strategy = ByMagnitude() if strategy is None else strategy
    if order is None:
        order = range(n)

    Qs = [d.Q.copy() for d in decomps]
    lams = [d.lam.copy() for d in decomps]

    if isinstance(strategy, ByMaterialDirection):
        frame = strategy.frame()
        for j in range(n):
            Qs[j], lams[j] = _material_order(Qs[j], lams[j], frame)
    elif not isinstance(strategy, ByMagnitude):
        raise TypeError(f"unknown assignment strategy {strategy!r}")

    r = reference_index
    ref_clusters = _clusters(lams[r])
    if ref_clusters and not isinstance(strategy, ByMaterialDirection):
        for j in order:
            if j == r:
                continue
            resolved = all(
                not any(set(g) <= set(h) for h in _clusters(lams[j])) for g in ref_clusters
            )
            if resolved:
                Qs[r] = _proper(_align_degenerate(Qs[r], lams[r], Qs[j]))
                break

    ref = Qs[r]
    out = []
    for j, d in enumerate(decomps):
        Q = Qs[j]
        if j != r:
            Q = _align_degenerate(Q, lams[j], ref)
            Q = _orient_to(Q, ref)
        out.append(replace(d, Q=Q, lam=lams[j]))
    return out


def orient_quaternions(quats, reference_index: int) -> list[np.ndarray]:
    """Flip quaternions into the hemisphere of the reference quaternion."""
    quats = [np.asarray(q, dtype=float) for q in quats]
    q0 = quats[reference_index]
    return [q if q0 @ q >= 0.0 else -q for q in quats]


def nearest_index(points, x_p) -> int:
    """Index of the data point closest to ``x_p``; ties go to the lowest index."""
    points = np.asarray(points, dtype=float)
    d2 = np.sum((points - np.asarray(x_p, dtype=float)) ** 2, axis=1)
    return int(np.argmin(d2))


def distance_order(points, x_p) -> list[int]:
    points = np.asarray(points, dtype=float)
    d2 = np.sum((points - np.asarray(x_p, dtype=float)) ** 2, axis=1)
    return [int(i) for i in np.argsort(d2, kind="stable")]
