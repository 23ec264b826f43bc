"""Tubular-neighborhood gauge construction over an adapted frame.

The map Gamma(r, s, t) = gamma(r, s) - t n(r, s) carries the boundary frame
into the interior.  The field is re-expressed in these coordinates via the
inverse differential of Gamma, and an explicit gauge with vanishing third
component is produced by cumulative quadrature of the frame components.
Its quality is certified by a discrete curl identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import cumulative_simpson

from .frame import AdaptedFrame


class GridMismatchError(ValueError):
    pass


def _dn_columns(frame: AdaptedFrame) -> tuple[np.ndarray, np.ndarray]:
    """Differential of the normal along the r and s grid directions."""
    nr, ns = len(frame.r_grid), len(frame.s_grid)
    dn_r = np.empty((nr, ns, 3))
    dn_s = np.empty((nr, ns, 3))
    for i in range(nr):
        for j in range(ns):
            nj = frame.chart.normal_jacobian(frame.uv[i, j])
            dn_r[i, j] = nj @ frame.uv_r[i, j]
            dn_s[i, j] = nj @ frame.uv_s[i, j]
    return dn_r, dn_s


def tubular_map(frame: AdaptedFrame, t_grid: np.ndarray):
    """Points Gamma(r, s, t) and differentials dGamma on the box grid.

    Returns (points (nr, ns, nt, 3), dgamma (nr, ns, nt, 3, 3)) where the
    columns of dgamma are the coordinate derivatives of Gamma.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
        raise GridMismatchError("t_grid must be increasing and start at 0")
    dn_r, dn_s = _dn_columns(frame)
    pts = frame.gamma[:, :, None, :] - t[None, None, :, None] * frame.normal[:, :, None, :]
    dg = np.empty(pts.shape + (3,))
    dg[..., 0] = frame.gamma_r[:, :, None, :] - t[None, None, :, None] * dn_r[:, :, None, :]
    dg[..., 1] = frame.gamma_s[:, :, None, :] - t[None, None, :, None] * dn_s[:, :, None, :]
    dg[..., 2] = -frame.normal[:, :, None, :] * np.ones_like(t)[None, None, :, None]
    return pts, dg


def tubular_metric(frame: AdaptedFrame, t_grid: np.ndarray) -> np.ndarray:
    """Metric G = dGamma^T dGamma, shape (nr, ns, nt, 3, 3)."""
    _, dg = tubular_map(frame, t_grid)
    return np.einsum("...ki,...kj->...ij", dg, dg)


def frame_field_3d(frame: AdaptedFrame, t_grid: np.ndarray):
    """Frame components of the field and metric density on the box grid.

    Returns (calB (nr, ns, nt, 3), sqrt_g (nr, ns, nt)); calB solves
    dGamma calB = B at each point, and sqrt_g = |det dGamma|.
    """
    pts, dg = tubular_map(frame, t_grid)
    b = frame.field.field(pts)
    calb = np.linalg.solve(dg, b[..., None])[..., 0]
    sqrt_g = np.abs(np.linalg.det(dg))
    return calb, sqrt_g


@dataclass
class GaugeA:
    """Sampled gauge on the (r, s, t) box with vanishing third component."""

    r_grid: np.ndarray
    s_grid: np.ndarray
    t_grid: np.ndarray
    A1: np.ndarray              # (nr, ns, nt)
    A2: np.ndarray
    A3: np.ndarray
    curl_residual: float        # max |curl A - sqrt(g) calB| on interior nodes
    curl_constant: float        # residual / max(step)^2
    meta: dict = dc_field(default_factory=dict)


def _central_diff(f: np.ndarray, grid: np.ndarray, axis: int) -> np.ndarray:
    return np.gradient(f, grid, axis=axis)


def gauge_potential(frame: AdaptedFrame, t_grid: np.ndarray) -> GaugeA:
    """Explicit gauge by cumulative quadrature of the frame components.

    A1 integrates sqrt(g) * calB2 in t from the boundary, A2 integrates
    -sqrt(g) * calB1 in t plus the boundary primitive F(r, s), and A3 is
    identically zero.  The discrete curl of the result is compared with
    sqrt(g) * calB; the residual is second order in the grid steps.
    """
    if frame.F is None:
        raise ValueError("frame incomplete; run frame_fields and F_integral")
    t = np.asarray(t_grid, dtype=float)
    calb, sqrt_g = frame_field_3d(frame, t)
    a1 = cumulative_simpson(sqrt_g * calb[..., 1], x=t, axis=2, initial=0.0)
    a2 = (-cumulative_simpson(sqrt_g * calb[..., 0], x=t, axis=2, initial=0.0)
          + frame.F[:, :, None])
    a3 = np.zeros_like(a1)

    target = sqrt_g[..., None] * calb
    curl = np.stack([
        _central_diff(a3, frame.s_grid, 1) - _central_diff(a2, t, 2),
        _central_diff(a1, t, 2) - _central_diff(a3, frame.r_grid, 0),
        _central_diff(a2, frame.r_grid, 0) - _central_diff(a1, frame.s_grid, 1),
    ], axis=-1)
    interior = (slice(1, -1),) * 3
    resid = float(np.abs((curl - target)[interior]).max())
    step = max(np.diff(frame.r_grid).max(), np.diff(frame.s_grid).max(),
               np.diff(t).max())
    return GaugeA(frame.r_grid, frame.s_grid, t, a1, a2, a3,
                  curl_residual=resid, curl_constant=resid / step ** 2,
                  meta={"step": step})
