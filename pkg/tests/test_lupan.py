"""Half-plane well problem: grids, assembly and the ground energy."""

import numpy as np
import pytest

from magspec.lupan import BoxTooSmallError, HalfPlaneGrid, adaptive_grid, \
    assemble_lupan, edge_mass, lupan_energy, lupan_ground


def test_grid_validation():
    with pytest.raises(ValueError, match="s_min < 0 < s_max"):
        HalfPlaneGrid(s_min=1.0, s_max=2.0)
    with pytest.raises(ValueError, match="t_max"):
        HalfPlaneGrid(t_max=-1.0)
    with pytest.raises(ValueError, match="counts"):
        HalfPlaneGrid(n_s=1)


def test_grid_nodes_staggered():
    g = HalfPlaneGrid(s_min=-2.0, s_max=2.0, t_max=1.0, n_s=8, n_t=4)
    assert g.ds == pytest.approx(0.5) and g.dt == pytest.approx(0.25)
    np.testing.assert_allclose(g.s_nodes(), -2.0 + 0.5 * (np.arange(8) + 0.5))
    np.testing.assert_allclose(g.t_nodes(), 0.25 * (np.arange(4) + 0.5))
    r = g.refined(2)
    assert (r.n_s, r.n_t) == (16, 8) and r.s_min == -2.0
    d = g.doubled_box()
    assert (d.s_min, d.s_max, d.t_max) == (-4.0, 4.0, 2.0)


def test_adaptive_grid_scales_with_angle():
    small = adaptive_grid(0.05)
    mid = adaptive_grid(0.8)
    tail = adaptive_grid(1.5)
    # far-out well at small angle pushes s_max up; valley leak near pi/2
    # pushes t_max up
    assert small.s_max > mid.s_max
    assert tail.t_max > mid.t_max
    for g in (small, mid, tail):
        assert g.ds <= 0.15 + 1e-12 and g.dt <= 0.15 + 1e-12


def test_assembly_hermitian_real():
    g = HalfPlaneGrid(s_min=-3.0, s_max=3.0, t_max=3.0, n_s=12, n_t=12)
    a = assemble_lupan(0.7, g)
    m = a.to_scipy()
    assert abs(m - m.getH()).max() == 0.0
    assert a.is_real
    # diagonal carries the sampled potential plus the stencil constant
    s, t = g.s_nodes(), g.t_nodes()
    pot = (t[None, :] * np.cos(0.7) - s[:, None] * np.sin(0.7)) ** 2
    diag = m.diagonal().real.reshape(12, 12)
    np.testing.assert_allclose(diag[:, 1:],
                               pot[:, 1:] + 2 / g.ds**2 + 2 / g.dt**2,
                               rtol=1e-13)


def test_edge_mass_concentration():
    g = HalfPlaneGrid(s_min=-2.0, s_max=2.0, t_max=2.0, n_s=10, n_t=10)
    interior = np.zeros((10, 10))
    interior[5, 5] = 1.0
    assert edge_mass(interior.ravel(), g) == 0.0
    boundary = np.zeros((10, 10))
    boundary[0, 3] = 1.0
    assert edge_mass(boundary.ravel(), g) == 1.0


def test_theta_validation():
    for bad in (0.0, -0.3, np.pi / 2, 2.0):
        with pytest.raises(ValueError, match="theta"):
            lupan_ground(bad)


def test_box_too_small_rejected():
    g = HalfPlaneGrid(s_min=-2.0, s_max=2.0, t_max=2.0, n_s=24, n_t=24)
    with pytest.raises(BoxTooSmallError):
        lupan_ground(0.7, g)


def test_ground_energy_frozen_value():
    # reference from a refined independent run on an enlarged box
    e = lupan_energy(0.5, adaptive_grid(0.5, spacing=0.2), tol=1e-7)
    assert abs(e - 0.8794) < 5e-3


def test_ground_state_diagnostics():
    e, report = lupan_ground(0.9, adaptive_grid(0.9, spacing=0.2), tol=1e-6)
    assert 0.5 < e < 1.0
    assert report.converged
    vec = report.eigenvectors[:, 0]
    assert np.linalg.norm(vec) == pytest.approx(1.0, rel=1e-8)
