import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensorp import so3
from tensorp.baselines import compute_metrics
from tensorp.errors import EmptyDataSet
from tensorp.interpolator import (
    DataPoint,
    PointFailure,
    SchemeConfig,
    interpolate_field,
    interpolate_tensor,
)
from tensorp.verify import four_tensor_setup, planar_tensor, random_dataset
from tensorp.wls import PolynomialBasis

SCHEMES = [f"{r}-{e}" for r in "RQ" for e in ("LOG", "MLS", "LOGMLS")]
seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


@pytest.mark.parametrize("name", SCHEMES)
def test_single_point_returns_input(name):
    T = random_dataset(np.random.default_rng(0), n=1)[0][0].tensor
    out = interpolate_tensor([DataPoint(np.zeros(3), T)], [3.0, -1.0, 2.0], SchemeConfig.from_name(name))
    assert np.allclose(out.T, T, atol=1e-12)


@pytest.mark.parametrize("name", SCHEMES)
def test_reproduces_data_at_data_points(name):
    rng = np.random.default_rng(1)
    pts = [(0.0, 0, 0), (1.0, 0, 0), (0, 1.0, 0), (1.0, 1.0, 0)]
    base = so3.random_rotation(rng)
    data = [
        DataPoint.make(p, base @ so3.exp_so3(0.3 * rng.normal(size=3)) @ planar_tensor((3 + k, 1.5, 1), 0.2 * k))
        for k, p in enumerate(pts)
    ]
    cfg = SchemeConfig.from_name(name, basis=PolynomialBasis("bilinear2d", (0, 1)))
    results = interpolate_field(data, np.array(pts), cfg)
    for d, r in zip(data, results):
        if name.endswith("-LOG") or name.startswith("Q"):
            # weighted averages do not interpolate; they only approach the data
            continue
        assert np.allclose(r.T, d.tensor, atol=1e-8)


@pytest.mark.parametrize("name", SCHEMES)
def test_constant_field(name):
    T = random_dataset(np.random.default_rng(2), n=1)[0][0].tensor
    data = [DataPoint(p, T) for p in np.random.default_rng(3).uniform(-1, 1, (12, 3))]
    for r in interpolate_field(data, np.random.default_rng(4).uniform(-1, 1, (5, 3)), SchemeConfig.from_name(name)):
        assert np.allclose(r.T, T, atol=1e-10)


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from(SCHEMES))
def test_objectivity(seed, name):
    rng = np.random.default_rng(seed)
    data, x_p = random_dataset(rng)
    M = so3.random_rotation(rng)
    cfg = SchemeConfig.from_name(name)
    a = interpolate_tensor([DataPoint(d.position, M @ d.tensor @ M.T) for d in data], x_p, cfg).T
    b = M @ interpolate_tensor(data, x_p, cfg).T @ M.T
    assert np.linalg.norm(a - b) <= 1e-8 * np.linalg.norm(b)


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from(SCHEMES), st.sampled_from([1e-3, 1.0, 1e3]))
def test_combined_scaling_and_rotation(seed, name, alpha):
    rng = np.random.default_rng(seed)
    data, x_p = random_dataset(rng)
    M = so3.random_rotation(rng)
    cfg = SchemeConfig.from_name(name)
    a = interpolate_tensor([DataPoint(d.position, alpha * M @ d.tensor @ M.T) for d in data], x_p, cfg).T
    b = alpha * M @ interpolate_tensor(data, x_p, cfg).T @ M.T
    assert np.linalg.norm(a - b) <= 1e-8 * np.linalg.norm(b)


@pytest.mark.parametrize("name", SCHEMES)
def test_symmetric_inputs_give_symmetric_output(name):
    pts, tensors = four_tensor_setup()
    data = [DataPoint.make(p, T) for p, T in zip(pts, tensors)]
    for sym in (False, True):
        r = interpolate_tensor(data, [1.0, -2.0, 0.0], SchemeConfig.from_name(name, symmetric=sym))
        assert np.linalg.norm(r.T - r.T.T) <= 1e-10
        assert np.allclose(r.R, np.eye(3), atol=1e-10)


def test_identical_eigenvalues_rotated_pair_keeps_anisotropy():
    T1 = planar_tensor((4.0, 1.0, 1.0), 0.0)
    T2 = planar_tensor((4.0, 1.0, 1.0), 0.99 * np.pi / 2)
    data = [DataPoint.make((-1.0, 0), T1), DataPoint.make((1.0, 0), T2)]
    fa = compute_metrics(T1).FA
    for name in SCHEMES:
        for r in interpolate_field(data, np.c_[np.linspace(-1, 1, 11), np.zeros((11, 2))], SchemeConfig.from_name(name)):
            assert np.allclose(r.lam, [4, 1, 1], rtol=1e-12)
            assert compute_metrics(r.T).FA == pytest.approx(fa, rel=1e-10)


@pytest.mark.parametrize("name", ["R-LOG", "Q-LOG"])
def test_four_corner_fa_has_no_interior_overshoot(name):
    pts, tensors = four_tensor_setup()
    data = [DataPoint.make(p, T) for p, T in zip(pts, tensors)]
    xs = np.linspace(-5, 5, 11)
    grid = np.array([(x, y, 0.0) for x in xs for y in xs])
    fa = np.array([compute_metrics(r.T).FA for r in interpolate_field(data, grid, SchemeConfig.from_name(name))])
    corner = [compute_metrics(T).FA for T in tensors]
    assert fa.min() >= min(corner) - 1e-12 and fa.max() <= max(corner) + 1e-12


def test_field_collects_failures(monkeypatch):
    data = [DataPoint.make((0.0, 0), np.eye(3)), DataPoint.make((1.0, 0), np.diag([1.0, -1.0, -1.0]))]
    grid = np.array([[0.2, 0, 0], [0.5, 0, 0]])
    out = interpolate_field(data, grid, SchemeConfig.from_name("Q-LOG"))
    assert all(isinstance(r, PointFailure) for r in out)
    assert [r.index for r in out] == [0, 1]


def test_field_threads_match_serial(monkeypatch):
    rng = np.random.default_rng(5)
    data, _ = random_dataset(rng)
    grid = rng.uniform(-1, 1, (8, 3))
    serial = interpolate_field(data, grid, SchemeConfig())
    monkeypatch.setenv("TENSORP_THREADS", "4")
    threaded = interpolate_field(data, grid, SchemeConfig())
    for a, b in zip(serial, threaded):
        assert np.array_equal(a.T, b.T)


def test_frozen_reference():
    rng = np.random.default_rng(6)
    data, x_p = random_dataset(rng)
    r = interpolate_tensor(data, x_p, SchemeConfig.from_name("Q-LOG", reference_index=3))
    assert r.reference_index == 3
    assert r.swa_iterations["Q"] > 0


def test_empty_inputs():
    with pytest.raises(EmptyDataSet):
        interpolate_tensor([], np.zeros(3))
    with pytest.raises(EmptyDataSet):
        interpolate_field([DataPoint.make((0, 0), np.eye(2))], np.zeros((0, 3)))


def test_scheme_names():
    assert SchemeConfig.from_name("r-logmls").name == "R-LOGMLS"
    with pytest.raises(ValueError):
        SchemeConfig.from_name("x-log")
