"""Interpolation of rotation fields over scattered points.

Both schemes work with rotations relative to a reference rotation ``R0``
(right multiplication, ``R_j = R0 @ Rr_j``):

* ``interpolate_rotation_R`` fits the relative rotation vectors componentwise
  with moving least squares.
* ``interpolate_rotation_Q`` takes the weighted spherical average of the
  relative quaternions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import so3
from .decomposition import nearest_index, orient_quaternions
from .errors import HemisphereViolation, NoConvergence
from .wls import PolynomialBasis, normalized_weights, wls_evaluate, wls_fit

SWA_TOL = 1e-12
SWA_MAX_ITER = 100


@dataclass
class SwaResult:
    quaternion: np.ndarray
    iterations: int
    residual: float


def relative_rotations(rotations, reference_index: int) -> list[np.ndarray]:
    R0 = rotations[reference_index]
    return [so3.relative_rotation(R0, R) for R in rotations]


def spherical_weighted_average(
    quats, weights, initial=None, tol: float = SWA_TOL, max_iter: int = SWA_MAX_ITER
) -> SwaResult:
    """Minimizer of ``sum_j w_j d(q, q_j)^2`` on the unit quaternion sphere.

    Fixed-point iteration: move along the weighted mean of the log maps of the
    data at the current iterate until that mean vanishes.
    """
    Q = np.asarray(quats, dtype=float)
    w = np.asarray(weights, dtype=float)
    q = Q[int(np.argmax(w))] if initial is None else np.asarray(initial, dtype=float)
    q = q / np.linalg.norm(q)
    step = np.inf
    for it in range(1, max_iter + 1):
        # log map at q of each q_j, as (angle/2)-scaled tangent vectors
        rel = Q @ so3.quat_left_matrix(so3.quat_inverse(q)).T
        tangent = w @ so3.quat_log_rows(rel)
        step = float(np.linalg.norm(tangent))
        q = so3.quat_product(q, so3.quat_exp(tangent))
        if step < tol:
            return SwaResult(q, it, step)
    raise NoConvergence(f"spherical average did not converge in {max_iter} iterations (step {step:.3e})")


def interpolate_rotation_R(
    rotations,
    points,
    x_p,
    basis: PolynomialBasis,
    c: float,
    reference_index: int | None = None,
    weights=None,
) -> np.ndarray:
    """MLS interpolation of relative rotation vectors, mapped back through ``R0 exp(.)``."""
    rotations = [so3.check_rotation(R) for R in rotations]
    points = np.asarray(points, dtype=float)
    if reference_index is None:
        reference_index = nearest_index(points, x_p)
    if weights is None:
        weights = normalized_weights(points, x_p, c)
    rel = relative_rotations(rotations, reference_index)
    thetas = np.array([so3.log_so3(Rr) for Rr in rel])
    a = wls_fit(points, thetas, basis, weights, x_p=x_p)
    theta_p = wls_evaluate(a, basis)
    return rotations[reference_index] @ so3.exp_so3(theta_p)


def interpolate_rotation_Q(
    rotations,
    points,
    x_p,
    c: float,
    reference_index: int | None = None,
    weights=None,
    return_iterations: bool = False,
):
    """Spherical weighted average of relative quaternions, mapped back through ``R0``."""
    rotations = [so3.check_rotation(R) for R in rotations]
    points = np.asarray(points, dtype=float)
    if reference_index is None:
        reference_index = nearest_index(points, x_p)
    if weights is None:
        weights = normalized_weights(points, x_p, c)
    rel = relative_rotations(rotations, reference_index)
    quats = orient_quaternions([so3.quat_from_rotation(Rr) for Rr in rel], reference_index)
    q0 = quats[reference_index]
    if any(q0 @ q == 0.0 for q in quats):
        # a relative rotation by exactly pi sits on the hemisphere boundary
        raise HemisphereViolation("relative quaternions cannot be placed in one open hemisphere")
    res = spherical_weighted_average(quats, weights, initial=q0)
    R_p = rotations[reference_index] @ so3.rotation_from_quat(res.quaternion)
    return (R_p, res.iterations) if return_iterations else R_p
