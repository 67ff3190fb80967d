"""Rotation group kernel: skew maps, exponential/logarithm, quaternions.

Quaternions are stored as numpy arrays ``[w, x, y, z]`` (scalar part first).
Rotation vectors are plain 3-arrays ``theta * axis``.
"""

from __future__ import annotations

import numpy as np

from .errors import AntipodalPair, InvalidRotation

_SMALL_ANGLE = 1e-7
ROTATION_TOL = 1e-10


def skew(a) -> np.ndarray:
    """Skew-symmetric matrix with ``skew(a) @ b == cross(a, b)``."""
    a = np.asarray(a, dtype=float).reshape(3)
    return np.array(
        [
            [0.0, -a[2], a[1]],
            [a[2], 0.0, -a[0]],
            [-a[1], a[0], 0.0],
        ]
    )


def unskew(S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    return 0.5 * np.array([S[2, 1] - S[1, 2], S[0, 2] - S[2, 0], S[1, 0] - S[0, 1]])


def exp_so3(theta) -> np.ndarray:
    """Rodrigues formula ``I + sin(t) S(e) + (1 - cos(t)) S(e)^2``."""
    theta = np.asarray(theta, dtype=float).reshape(3)
    t = float(np.linalg.norm(theta))
    S = skew(theta)
    if t < _SMALL_ANGLE:
        a = 1.0 - t * t / 6.0
        b = 0.5 - t * t / 24.0
    else:
        a = np.sin(t) / t
        b = (1.0 - np.cos(t)) / (t * t)
    return np.eye(3) + a * S + b * (S @ S)


def check_rotation(R, tol: float = ROTATION_TOL) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        raise InvalidRotation("rotation must be a finite 3x3 matrix")
    orth = np.linalg.norm(R.T @ R - np.eye(3))
    det = np.linalg.det(R)
    if orth > tol or abs(det - 1.0) > tol:
        raise InvalidRotation(
            f"not in SO(3): |R^T R - I| = {orth:.3e}, det = {det:.15g}"
        )
    return R


def _canonical_hemisphere(q: np.ndarray) -> np.ndarray:
    if q[0] < 0.0:
        return -q
    if q[0] == 0.0:
        for v in q[1:]:
            if v != 0.0:
                return q if v > 0.0 else -q
    return q


def quat_from_rotation(R, tol: float = ROTATION_TOL) -> np.ndarray:
    """Spurrier's algorithm; result is put in the ``w >= 0`` hemisphere."""
    R = check_rotation(R, tol)
    tr = np.trace(R)
    diag = np.diag(R)
    i = int(np.argmax(diag))
    q = np.empty(4)
    if tr >= diag[i]:
        w = 0.5 * np.sqrt(1.0 + tr)
        q[0] = w
        q[1] = (R[2, 1] - R[1, 2]) / (4.0 * w)
        q[2] = (R[0, 2] - R[2, 0]) / (4.0 * w)
        q[3] = (R[1, 0] - R[0, 1]) / (4.0 * w)
    else:
        j = (i + 1) % 3
        k = (i + 2) % 3
        qi = 0.5 * np.sqrt(max(1.0 + 2.0 * R[i, i] - tr, 0.0))
        q[1 + i] = qi
        q[0] = (R[k, j] - R[j, k]) / (4.0 * qi)
        q[1 + j] = (R[j, i] + R[i, j]) / (4.0 * qi)
        q[1 + k] = (R[k, i] + R[i, k]) / (4.0 * qi)
    q /= np.linalg.norm(q)
    return _canonical_hemisphere(q)


def rotation_from_quat(q) -> np.ndarray:
    """``I + 2 w S(v) + 2 S(v) S(v)`` for ``q = w + v``."""
    q = np.asarray(q, dtype=float).reshape(4)
    q = q / np.linalg.norm(q)
    S = skew(q[1:])
    return np.eye(3) + 2.0 * q[0] * S + 2.0 * (S @ S)


def quat_from_rotvec(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).reshape(3)
    t = float(np.linalg.norm(theta))
    if t < _SMALL_ANGLE:
        half = 0.5 - t * t / 48.0
    else:
        half = np.sin(0.5 * t) / t
    return np.concatenate([[np.cos(0.5 * t)], half * theta])


def log_so3(R, tol: float = ROTATION_TOL) -> np.ndarray:
    """Rotation vector of ``R`` with norm in ``[0, pi]``."""
    q = quat_from_rotation(R, tol)
    return 2.0 * quat_log(q)


def quat_product(q, p) -> np.ndarray:
    """Hamilton product ``qp = qp - q.p + q p_vec + p q_vec + q_vec x p_vec``."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    w = q[0] * p[0] - q[1:] @ p[1:]
    v = q[0] * p[1:] + p[0] * q[1:] + np.cross(q[1:], p[1:])
    r = np.concatenate([[w], v])
    return r / np.linalg.norm(r)


def quat_left_matrix(q) -> np.ndarray:
    """Matrix ``L`` with ``L @ p`` equal to the (unnormalized) product ``q p``."""
    w, x, y, z = np.asarray(q, dtype=float)
    return np.array(
        [
            [w, -x, -y, -z],
            [x, w, -z, y],
            [y, z, w, -x],
            [z, -y, x, w],
        ]
    )


def quat_inverse(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return np.concatenate([[q[0]], -q[1:]]) / (q @ q)


def quat_log(q) -> np.ndarray:
    """Logarithm of a unit quaternion, returned as the 3-vector ``(t/2) e``."""
    q = np.asarray(q, dtype=float)
    q = q / np.linalg.norm(q)
    vn = float(np.linalg.norm(q[1:]))
    angle = np.arctan2(vn, q[0])
    if vn == 0.0:
        return np.zeros(3)
    return angle * q[1:] / vn


def quat_log_rows(Q) -> np.ndarray:
    """Row-wise :func:`quat_log` for an ``(n, 4)`` array of unit quaternions."""
    Q = np.asarray(Q, dtype=float)
    Q = Q / np.linalg.norm(Q, axis=1, keepdims=True)
    vn = np.linalg.norm(Q[:, 1:], axis=1)
    angle = np.arctan2(vn, Q[:, 0])
    scale = np.divide(angle, vn, out=np.zeros_like(vn), where=vn > 0.0)
    return scale[:, None] * Q[:, 1:]


def quat_exp(v) -> np.ndarray:
    """Inverse of :func:`quat_log` on unit quaternions."""
    v = np.asarray(v, dtype=float).reshape(3)
    n = float(np.linalg.norm(v))
    if n < _SMALL_ANGLE:
        return np.concatenate([[np.cos(n)], (1.0 - n * n / 6.0) * v])
    return np.concatenate([[np.cos(n)], np.sin(n) / n * v])


def quat_power(q, t: float) -> np.ndarray:
    return quat_exp(t * quat_log(q))


def relative_rotation(R1, R2) -> np.ndarray:
    """``R21 = R1^T R2`` so that ``R1 @ R21 == R2``."""
    return np.asarray(R1, dtype=float).T @ np.asarray(R2, dtype=float)


def geodesic_distance_s3(q1, q2) -> float:
    """``|ln(q1^{-1} q2)|`` on the 3-sphere."""
    return float(np.linalg.norm(quat_log(quat_product(quat_inverse(q1), q2))))


def geodesic_distance_s3_dot(q1, q2) -> float:
    """Same distance through the clamped 4-D dot product."""
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    d = q1 @ q2 / (np.linalg.norm(q1) * np.linalg.norm(q2))
    return float(np.arccos(np.clip(d, -1.0, 1.0)))


def _unit(n) -> np.ndarray:
    n = np.asarray(n, dtype=float).reshape(3)
    nn = np.linalg.norm(n)
    if abs(nn - 1.0) > 1e-8:
        raise ValueError(f"expected a unit vector, got norm {nn}")
    return n / nn


def geodesic_distance_s2(n1, n2) -> float:
    """Angle between two unit vectors, in ``[0, pi]``."""
    return float(np.arccos(np.clip(_unit(n1) @ _unit(n2), -1.0, 1.0)))


def slerp(q1, q2, w: float) -> np.ndarray:
    """``(q2 q1^{-1})^w q1``."""
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    if q1 @ q2 <= -1.0 + 1e-14:
        raise AntipodalPair("slerp between antipodal quaternions is undefined")
    rel = quat_product(q2, quat_inverse(q1))
    return quat_product(quat_power(rel, w), q1)


def axis_rotation(axis: int, angle: float) -> np.ndarray:
    """Rotation about coordinate axis ``axis`` (0, 1 or 2) by ``angle``."""
    c, s = np.cos(angle), np.sin(angle)
    R = np.eye(3)
    j, k = (axis + 1) % 3, (axis + 2) % 3
    R[j, j] = c
    R[j, k] = -s
    R[k, j] = s
    R[k, k] = c
    return R


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    return rotation_from_quat(q / np.linalg.norm(q))
