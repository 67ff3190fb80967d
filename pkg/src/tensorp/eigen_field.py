"""Eigenvalue interpolation: weighted geometric mean, MLS, and MLS in the log domain."""

from __future__ import annotations

import numpy as np

from .errors import NonPositiveEigenvalue
from .wls import PolynomialBasis, normalized_weights, wls_evaluate, wls_fit

EIGEN_FLOOR = 1e-300


def _safe_log(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if np.any(~(v > EIGEN_FLOOR)):
        raise NonPositiveEigenvalue(f"log-based scheme needs positive eigenvalues, min = {v.min():.3e}")
    return np.log(v)


def weighted_log_average(values, weights) -> np.ndarray:
    """``exp(sum_j w_j ln v_j)`` per channel."""
    vals = np.asarray(values, dtype=float)
    logs = _safe_log(vals)
    w = np.asarray(weights, dtype=float)
    flat = vals.reshape(len(w), -1)
    out = np.exp(w @ logs.reshape(len(w), -1))
    # the mean lies in [min, max] exactly; clip only removes exp/log rounding at the ends
    out = np.clip(out, flat.min(axis=0), flat.max(axis=0))
    return out.reshape(vals.shape[1:])


def interpolate_eigen_LOG(values, points, x_p, c: float, weights=None) -> np.ndarray:
    if weights is None:
        weights = normalized_weights(points, x_p, c)
    return weighted_log_average(values, weights)


def interpolate_eigen_MLS(values, points, x_p, basis: PolynomialBasis, c: float, weights=None) -> np.ndarray:
    if weights is None:
        weights = normalized_weights(points, x_p, c)
    a = wls_fit(points, np.asarray(values, dtype=float), basis, weights, x_p=x_p)
    return wls_evaluate(a, basis)


def interpolate_eigen_LOGMLS(values, points, x_p, basis: PolynomialBasis, c: float, weights=None) -> np.ndarray:
    vals = np.asarray(values, dtype=float)
    _safe_log(vals)
    if weights is None:
        weights = normalized_weights(points, x_p, c)
    # fit log-ratios against the heaviest point; MLS reproduces the constant offset,
    # and a common scale factor then cancels exactly instead of through the solve
    anchor = vals[int(np.argmax(weights))]
    logs = np.log(vals / anchor)
    return anchor * np.exp(interpolate_eigen_MLS(logs, points, x_p, basis, c, weights=weights))
