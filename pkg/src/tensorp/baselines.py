"""Componentwise interpolants for SPD tensors and scalar tensor metrics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .decomposition import DEGENERACY_TOL, symmetric_eigen
from .errors import DegeneratePrimary, NotSPD


@dataclass(frozen=True)
class Metrics:
    determinant: float
    trace: float
    FA: float
    HA: float
    mean_eigenvalue: float


def _spd_eigen(T):
    T = np.asarray(T, dtype=float)
    lam, Q = symmetric_eigen(T)
    if lam[-1] <= 0.0:
        raise NotSPD(f"tensor is not positive definite (min eigenvalue {lam[-1]:.3e})")
    return lam, Q


def _cholesky(T) -> np.ndarray:
    try:
        return np.linalg.cholesky(np.asarray(T, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise NotSPD(str(exc)) from None


def _weights(weights, n):
    w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
    if len(w) != n:
        raise ValueError("one weight per tensor required")
    return w


def interp_euclidean(tensors, weights=None) -> np.ndarray:
    T = np.asarray(tensors, dtype=float)
    return np.einsum("j,jab->ab", _weights(weights, len(T)), T)


def interp_cholesky(tensors, weights=None) -> np.ndarray:
    w = _weights(weights, len(tensors))
    L = np.einsum("j,jab->ab", w, np.array([_cholesky(T) for T in tensors]))
    return L @ L.T


def spd_log(T) -> np.ndarray:
    lam, Q = _spd_eigen(T)
    return Q.T @ np.diag(np.log(lam)) @ Q


def sym_exp(S) -> np.ndarray:
    lam, Q = symmetric_eigen(S)
    return Q.T @ np.diag(np.exp(lam)) @ Q


def interp_log_euclidean(tensors, weights=None) -> np.ndarray:
    w = _weights(weights, len(tensors))
    return sym_exp(np.einsum("j,jab->ab", w, np.array([spd_log(T) for T in tensors])))


def interp_log_cholesky(tensors, weights=None) -> np.ndarray:
    """Log-mean of the Cholesky diagonals plus a linear mean of the strictly lower parts."""
    w = _weights(weights, len(tensors))
    Ls = np.array([_cholesky(T) for T in tensors])
    diag = np.exp(w @ np.log(np.diagonal(Ls, axis1=1, axis2=2)))
    lower = np.einsum("j,jab->ab", w, np.tril(Ls, k=-1))
    L = lower + np.diag(diag)
    return L @ L.T


BASELINES = {
    "E": interp_euclidean,
    "C": interp_cholesky,
    "LOG-E": interp_log_euclidean,
    "LOG-C": interp_log_cholesky,
}


def compute_metrics(T) -> Metrics:
    """Determinant, trace, fractional and Hilbert anisotropy of an SPD tensor.

    FA uses the square-rooted form so that it lies in ``[0, 1]``.
    """
    lam, _ = _spd_eigen(T)
    mean = float(lam.mean())
    fa = np.sqrt(3.0 * np.sum((lam - mean) ** 2) / (2.0 * np.sum(lam**2)))
    return Metrics(
        determinant=float(np.prod(lam)),
        trace=float(np.sum(lam)),
        FA=float(fa),
        HA=float(np.log(lam[0] / lam[-1])),
        mean_eigenvalue=mean,
    )


def primary_direction(T) -> np.ndarray:
    lam, Q = symmetric_eigen(0.5 * (np.asarray(T, float) + np.asarray(T, float).T))
    if abs(lam[0] - lam[1]) < DEGENERACY_TOL * abs(lam[0]):
        warnings.warn("largest eigenvalue is repeated", DegeneratePrimary, stacklevel=3)
    return Q[0]


def orientation_cosine(T1, T2) -> float:
    """Cosine between primary eigenvectors, with the sign of the second aligned to the first."""
    return float(abs(primary_direction(T1) @ primary_direction(T2)))


def eigenvector_deviation(T_a, T_b) -> float:
    """``sqrt(sum_i arccos(|n_a^i . n_b^i|)^2)`` over eigenvectors in decreasing eigenvalue order."""
    _, Qa = symmetric_eigen(0.5 * (T_a + T_a.T))
    _, Qb = symmetric_eigen(0.5 * (T_b + T_b.T))
    dots = np.clip(np.abs(np.sum(Qa * Qb, axis=1)), 0.0, 1.0)
    return float(np.sqrt(np.sum(np.arccos(dots) ** 2)))


def objectivity_deviation(interpolate, tensors, M) -> float:
    """Eigenvector deviation between ``Int(M T_j M^T)`` and ``M Int(T_j) M^T``.

    ``interpolate`` maps a list of tensors to the interpolated tensor; positions
    and weights are bound by the caller.
    """
    M = np.asarray(M, dtype=float)
    rotated = [M @ T @ M.T for T in tensors]
    a = interpolate(rotated)
    b = M @ interpolate(list(tensors)) @ M.T
    return eigenvector_deviation(a, b)
