import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensorp import so3
from tensorp.decomposition import (
    ByMagnitude,
    ByMaterialDirection,
    TensorDecomposition,
    assign_and_orient,
    nearest_index,
    orient_quaternions,
    polar_decompose,
    symmetric_eigen,
)
from tensorp.errors import AmbiguousOrientation, NegativeDeterminant, NotInvertible, NotSymmetric

seeds = st.integers(0, 2**32 - 1)


def planar(lam, angle):
    R = so3.axis_rotation(2, angle)
    return R @ np.diag(lam) @ R.T


def random_tensor(rng):
    lam = np.exp(rng.uniform(-2, 2, 3))
    Q = so3.random_rotation(rng)
    return so3.random_rotation(rng) @ Q.T @ np.diag(lam) @ Q


def test_symmetric_eigen_diagonal():
    lam, Q = symmetric_eigen(np.diag([1.0, 3.0, 2.0]))
    assert np.allclose(lam, [3, 2, 1])
    assert np.allclose(np.abs(Q), [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert np.linalg.det(Q) == pytest.approx(1.0)


def test_symmetric_eigen_identity():
    lam, Q = symmetric_eigen(np.eye(3))
    assert np.allclose(lam, 1.0)
    assert np.allclose(Q @ Q.T, np.eye(3))


@given(seeds)
def test_symmetric_eigen_residual(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(3, 3))
    U = A + A.T
    lam, Q = symmetric_eigen(U)
    for l, n in zip(lam, Q):
        assert np.linalg.norm(U @ n - l * n) < 1e-9 * np.linalg.norm(U)
    assert np.allclose(Q @ Q.T, np.eye(3), atol=1e-10)
    assert np.all(np.diff(lam) <= 0)


def test_symmetric_eigen_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        symmetric_eigen([[1, 2, 0], [0, 1, 0], [0, 0, 1]])


def test_polar_identity_and_rotation():
    d = polar_decompose(np.eye(3))
    assert np.allclose(d.R, np.eye(3)) and np.allclose(d.lam, 1)
    R0 = so3.exp_so3([0.3, -0.2, 0.9])
    d = polar_decompose(R0)
    assert np.allclose(d.R, R0, atol=1e-12) and np.allclose(d.lam, 1)


def test_polar_recovers_construction():
    R0 = so3.axis_rotation(2, np.pi / 2)
    T = R0 @ planar((10.0, 1.0, 1.0), np.pi / 4)
    d = polar_decompose(T)
    assert np.allclose(d.R, R0, atol=1e-12)
    assert np.allclose(d.lam, [10, 1, 1])
    assert abs(d.Q[0] @ np.array([1, 1, 0]) / np.sqrt(2)) == pytest.approx(1.0)


@given(seeds)
def test_polar_reconstruction(seed):
    T = random_tensor(np.random.default_rng(seed))
    d = polar_decompose(T)
    assert np.linalg.norm(d.tensor() - T) <= 1e-10 * np.linalg.norm(T)
    assert np.allclose(d.R.T @ d.R, np.eye(3), atol=1e-12)
    assert np.linalg.det(d.Q) == pytest.approx(1.0)
    assert np.all(d.lam > 0)


@given(seeds)
def test_polar_of_spd_is_identity_rotation(seed):
    rng = np.random.default_rng(seed)
    Q = so3.random_rotation(rng)
    T = Q.T @ np.diag(np.exp(rng.uniform(-2, 2, 3))) @ Q
    d = polar_decompose(T)
    assert np.allclose(d.R, np.eye(3), atol=1e-9)
    assert np.allclose(d.U, T, atol=1e-9 * np.linalg.norm(T))


def test_polar_rejects():
    with pytest.raises(NegativeDeterminant):
        polar_decompose(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(NotInvertible):
        polar_decompose(np.diag([1.0, 1.0, 0.0]))


def test_polar_rotation_independent_of_eigen_order():
    rng = np.random.default_rng(3)
    T = random_tensor(rng)
    d = polar_decompose(T)
    perm = [2, 0, 1]
    Q = d.Q[perm]
    if np.linalg.det(Q) < 0:
        Q[2] *= -1
    alt = TensorDecomposition(R=d.R, Q=Q, lam=d.lam[perm])
    assert np.allclose(alt.U, d.U) and np.allclose(alt.tensor(), T)


def test_assign_identical_is_noop():
    d = polar_decompose(planar((5.0, 2.0, 1.0), 0.3))
    out = assign_and_orient([d, d, d], 0)
    for o in out:
        assert np.allclose(o.Q, d.Q)


def test_assign_flips_reversed_neighbor():
    ref = TensorDecomposition(np.eye(3), np.eye(3), np.array([3.0, 2.0, 1.0]))
    n1 = np.array([-0.99, 0.1, 0.0])
    n1 /= np.linalg.norm(n1)
    n2 = np.cross([0, 0, 1.0], n1)
    Q = np.vstack([n1, n2, np.cross(n1, n2)])
    out = assign_and_orient([ref, TensorDecomposition(np.eye(3), Q, ref.lam)], 0)
    assert out[1].Q[0] @ ref.Q[0] > 0
    assert out[1].Q[1] @ ref.Q[1] > 0
    assert np.linalg.det(out[1].Q) == pytest.approx(1.0)
    # the stretch tensor is unchanged by the sign flips
    assert np.allclose(out[1].U, TensorDecomposition(np.eye(3), Q, ref.lam).U)


def test_orientation_near_0_and_pi_give_same_result():
    d_ref = polar_decompose(planar((4.0, 2.0, 1.0), 0.2))
    a = polar_decompose(planar((6.0, 1.5, 1.0), 0.01))
    b = polar_decompose(planar((6.0, 1.5, 1.0), np.pi + 0.01))
    oa = assign_and_orient([d_ref, a], 0)[1]
    ob = assign_and_orient([d_ref, b], 0)[1]
    assert np.allclose(oa.Q, ob.Q, atol=1e-12)


@settings(max_examples=30)
@given(seeds)
def test_assign_is_idempotent(seed):
    rng = np.random.default_rng(seed)
    ds = [polar_decompose(random_tensor(rng)) for _ in range(4)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        once = assign_and_orient(ds, 1)
        twice = assign_and_orient(once, 1)
    for a, b in zip(once, twice):
        assert np.allclose(a.Q, b.Q)


def test_ambiguous_orientation_warns():
    a = polar_decompose(planar((5.0, 2.0, 1.0), 0.0))
    b = polar_decompose(planar((5.0, 2.0, 1.0), np.pi / 2))
    with pytest.warns(AmbiguousOrientation):
        assign_and_orient([a, b], 0)


def test_degenerate_reference_pinned_by_neighbor():
    iso = polar_decompose(np.diag([2.0, 2.0, 1.0]))
    nb = polar_decompose(planar((3.0, 2.0, 1.0), 0.4))
    out = assign_and_orient([iso, nb], 0, order=[0, 1])
    assert abs(out[0].Q[0] @ nb.Q[0]) == pytest.approx(1.0)


def test_material_direction_assignment():
    # stretch across the beam larger than along it: magnitude order puts e2 first
    d = polar_decompose(np.diag([1.0, 1.3, 1.0]))
    by_mag = assign_and_orient([d], 0, ByMagnitude())[0]
    by_mat = assign_and_orient([d], 0, ByMaterialDirection())[0]
    assert abs(by_mag.Q[0] @ [0, 1, 0]) == pytest.approx(1.0)
    assert np.allclose(by_mat.Q, np.eye(3))
    assert np.allclose(by_mat.lam, [1.0, 1.3, 1.0])
    assert np.allclose(by_mat.U, d.U)


def test_orient_quaternions():
    rng = np.random.default_rng(0)
    qs = [q / np.linalg.norm(q) for q in rng.normal(size=(20, 4))]
    out = orient_quaternions(qs, 3)
    for q, o in zip(qs, out):
        assert so3.geodesic_distance_s3_dot(out[3], o) <= so3.geodesic_distance_s3_dot(out[3], -o) + 1e-15
        assert np.allclose(so3.rotation_from_quat(q), so3.rotation_from_quat(o))


def test_nearest_index_ties_go_low():
    pts = [(1.0, 0, 0), (-1.0, 0, 0), (0, 2.0, 0)]
    assert nearest_index(pts, (0, 0, 0)) == 0
    assert nearest_index(pts, (-0.9, 0, 0)) == 1
