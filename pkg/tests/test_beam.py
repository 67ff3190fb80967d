import warnings

import numpy as np
import pytest

from tensorp.beam import (
    BeamConfig,
    beam_deformation_gradient,
    convergence_config,
    corner_points,
    loglog_slope,
    run_convergence,
    run_table2,
)
from tensorp.decomposition import polar_decompose
from tensorp.errors import OutOfDomain


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


def test_undeformed_beam_is_identity():
    cfg = BeamConfig(curvature=(0.0, 0.0))
    for s1, s2 in [(0, 0), (0.3, 0.05), (1.0, -0.05)]:
        assert np.allclose(beam_deformation_gradient(s1, s2, cfg), np.eye(3))


def test_half_circle_center_is_quarter_turn():
    F = beam_deformation_gradient(0.5, 0.0, BeamConfig())
    assert np.allclose(F[:2, :2], [[0, -1], [1, 0]], atol=1e-15)


def test_constant_curvature_centerline_is_pure_rotation():
    cfg = BeamConfig(curvature=(2.0, 0.0))
    for s1 in np.linspace(0, 1, 7):
        F = beam_deformation_gradient(s1, 0.0, cfg)
        d = polar_decompose(F)
        assert np.allclose(d.lam, 1.0)
        assert np.allclose(d.R, F, atol=1e-12)


def test_fiber_stretch_matches_curvature():
    # across the height the axial fiber scales by (1 - k s2)
    F = beam_deformation_gradient(0.2, 0.05, BeamConfig())
    assert np.linalg.norm(F[:, 0]) == pytest.approx(1 - np.pi * 0.05)


def test_positive_determinant_over_domain():
    cfg = convergence_config()
    for s1 in np.linspace(0, 1, 21):
        for s2 in np.linspace(-0.05, 0.05, 5):
            assert np.linalg.det(beam_deformation_gradient(s1, s2, cfg)) > 0


def test_out_of_domain():
    with pytest.raises(OutOfDomain):
        beam_deformation_gradient(1.5, 0.0, BeamConfig())
    with pytest.raises(OutOfDomain):
        beam_deformation_gradient(0.5, 0.2, BeamConfig())


def test_corner_points_layout():
    pts = corner_points((0.5, 0.0), 1.0, 0.1)
    assert np.allclose(pts[:, :2], [[1, 0.05], [0, 0.05], [0, -0.05], [1, -0.05]])
    assert len(corner_points((0, 0), 1, 1, edge_midpoints=True)) == 8


def test_midpoint_log_entry_is_geometric_mean_of_fiber_stretches():
    out = run_table2()
    k, h = np.pi, 0.1
    expected = np.sqrt((1 - k * h / 2) * (1 + k * h / 2))
    for name in ("R-LOG", "Q-LOG", "R-LOGMLS", "Q-LOGMLS"):
        assert out[name][1, 0] == pytest.approx(expected, abs=1e-12)
    assert np.allclose(out["R-MLS"], [[0, -1], [1, 0]], atol=1e-12)


def test_convergence_errors_decrease_and_csv(tmp_path):
    run = run_convergence(4, levels=range(1, 6), fit_levels=(2, 3, 4, 5))
    for (scheme, qty), err in run.errors.items():
        if qty == "F":
            assert np.all(np.diff(err) < 0), scheme
    path = tmp_path / "conv.csv"
    run.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "scheme,quantity,h,error"
    assert len(lines) == 1 + 6 * 7 * 5


def test_loglog_slope():
    h = 2.0 ** -np.arange(3, 8)
    assert loglog_slope(h, 5 * h**2) == pytest.approx(2.0)
