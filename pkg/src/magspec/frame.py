"""Adapted boundary coordinates for a magnetic field on a surface patch.

Pipeline: integrate the field-aligned curve on the boundary, fan out a
family of unit-speed surface geodesics orthogonal to it, then evaluate the
frame components of the field, the inclination angle and the boundary
energy density on the resulting (r, s) grid.

Both ODEs are integrated in chart coordinates with a fourth-order
Runge-Kutta scheme, so the computed points lie on the surface to rounding
accuracy and the geodesic equation uses the chart's exact Christoffel
symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .bandcurve import BandCurve
from .charts import BoundaryChart
from .fields import MagneticFieldSpec


class AssumptionError(RuntimeError):
    """A working hypothesis of the asymptotic theory fails on the data."""


class DegenerateTangentError(RuntimeError):
    pass


def _christoffel(chart: BoundaryChart, p: np.ndarray) -> np.ndarray:
    """Christoffel symbols gamma[k, i, j] of the chart metric."""
    j = chart.jacobian(p)
    s = chart.second(p)
    g = j.T @ j
    rhs = np.einsum("kij,kl->lij", s, j)
    return np.linalg.solve(g, rhs.reshape(2, 4)).reshape(2, 2, 2)


def _tangent_direction(chart: BoundaryChart, field: MagneticFieldSpec,
                       p: np.ndarray) -> np.ndarray:
    """Chart velocity of the unit tangential field direction at chart point p."""
    x = chart.param(p)
    j = chart.jacobian(p)
    n = chart.normal(p)
    b = field.field(x)
    b_par = b - np.dot(b, n) * n
    nb = np.linalg.norm(b_par)
    if nb < 1e-6:
        raise DegenerateTangentError(
            "magnetic field tangent-projection degenerate at "
            f"chart point {tuple(p)}")
    return np.linalg.lstsq(j, b_par / nb, rcond=None)[0]


def _rk4(f, y0: np.ndarray, t_vals: np.ndarray) -> np.ndarray:
    out = np.empty((len(t_vals),) + y0.shape)
    out[0] = y = np.asarray(y0, dtype=float)
    for i in range(len(t_vals) - 1):
        dt = t_vals[i + 1] - t_vals[i]
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
    return out


@dataclass
class FieldLineCurve:
    """Unit-speed curve on the boundary tangent to the field's projection."""

    chart: BoundaryChart
    field: MagneticFieldSpec
    s_vals: np.ndarray          # (ns,), contains 0
    uv: np.ndarray              # (ns, 2) chart coordinates

    @property
    def points(self) -> np.ndarray:
        return np.array([self.chart.param(p) for p in self.uv])

    @property
    def tangents(self) -> np.ndarray:
        out = np.empty((len(self.s_vals), 3))
        for i, p in enumerate(self.uv):
            out[i] = self.chart.jacobian(p) @ _tangent_direction(
                self.chart, self.field, p)
        return out


def _span_grid(span: tuple[float, float], step: float) -> np.ndarray:
    """Uniform grid over span containing 0 exactly."""
    lo, hi = span
    if not lo <= 0.0 <= hi:
        raise ValueError(f"span {span} must contain 0")
    n_neg = int(np.ceil(-lo / step))
    n_pos = int(np.ceil(hi / step))
    return np.concatenate([np.arange(-n_neg, 0), np.arange(0, n_pos + 1)]) * step


def field_line(chart: BoundaryChart, field: MagneticFieldSpec,
               uv0, s_span: tuple[float, float],
               step: float = 0.01) -> FieldLineCurve:
    """Integrate the field-aligned unit curve through chart point uv0."""
    uv0 = np.asarray(uv0, dtype=float)
    s_vals = _span_grid(s_span, step)
    i0 = int(np.argmin(np.abs(s_vals)))

    def rhs(p):
        return _tangent_direction(chart, field, p)

    uv = np.empty((len(s_vals), 2))
    uv[i0:] = _rk4(rhs, uv0, s_vals[i0:])
    uv[:i0 + 1] = _rk4(rhs, uv0, s_vals[i0::-1])[::-1]
    for p in uv[(0, -1), :]:
        if not chart.in_domain(p):
            raise ValueError("field line leaves the chart domain; "
                             "shrink s_span or enlarge the domain")
    return FieldLineCurve(chart, field, s_vals, uv)


@dataclass
class AdaptedFrame:
    """Sampled adapted-coordinate data on an (r, s) boundary grid.

    Built in stages: geodesic_family fills the geometry, frame_fields the
    magnetic quantities, F_integral the boundary gauge primitive.
    """

    chart: BoundaryChart
    field: MagneticFieldSpec
    r_grid: np.ndarray          # (nr,), contains 0
    s_grid: np.ndarray          # (ns,), contains 0
    uv: np.ndarray              # (nr, ns, 2)
    uv_r: np.ndarray            # (nr, ns, 2) chart velocity of the geodesics
    # filled by frame_fields / F_integral:
    alpha: np.ndarray | None = None      # (nr, ns), |d_s gamma|^2
    B1: np.ndarray | None = None
    B2: np.ndarray | None = None
    B3: np.ndarray | None = None
    theta: np.ndarray | None = None
    beta: np.ndarray | None = None
    F: np.ndarray | None = None
    band: BandCurve | None = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        nr, ns = len(self.r_grid), len(self.s_grid)
        self.gamma = np.empty((nr, ns, 3))
        self.gamma_r = np.empty((nr, ns, 3))
        self.normal = np.empty((nr, ns, 3))
        self._jac = np.empty((nr, ns, 3, 2))
        for i in range(nr):
            for j in range(ns):
                p = self.uv[i, j]
                self.gamma[i, j] = self.chart.param(p)
                jac = self.chart.jacobian(p)
                self._jac[i, j] = jac
                self.gamma_r[i, j] = jac @ self.uv_r[i, j]
                self.normal[i, j] = self.chart.normal(p)
        # transverse derivative via a cubic spline of the chart path in s
        uv_s = CubicSpline(self.s_grid, self.uv, axis=1)(self.s_grid, nu=1)
        self.uv_s = uv_s
        self.gamma_s = np.einsum("ijkl,ijl->ijk", self._jac, uv_s)

    @property
    def i_r0(self) -> int:
        return int(np.argmin(np.abs(self.r_grid)))

    @property
    def i_s0(self) -> int:
        return int(np.argmin(np.abs(self.s_grid)))

    def invariant_report(self) -> dict[str, float]:
        """Max deviations of the orthogonality/unit-speed/alpha identities."""
        unit = np.abs(np.linalg.norm(self.gamma_r, axis=-1) - 1.0).max()
        ortho = np.abs(np.einsum("ijk,ijk->ij",
                                 self.gamma_r, self.gamma_s)).max()
        i0 = self.i_r0
        alpha = np.einsum("ijk,ijk->ij", self.gamma_s, self.gamma_s)
        alpha0 = np.abs(alpha[i0] - 1.0).max()
        ds = CubicSpline(self.s_grid, alpha[i0])(self.s_grid, nu=1)
        return {"unit_speed": float(unit), "orthogonality": float(ortho),
                "alpha_boundary": float(alpha0),
                "alpha_s_derivative": float(np.abs(ds).max())}


def geodesic_family(chart: BoundaryChart, curve: FieldLineCurve,
                    r_span: tuple[float, float],
                    step: float = 0.01) -> AdaptedFrame:
    """Fan unit-speed geodesics orthogonally off the curve.

    The initial geodesic velocity is -(n x curve tangent), which makes
    (d_r gamma, d_s gamma, n) a direct frame on the curve.
    """
    r_vals = _span_grid(r_span, step)
    ns = len(curve.s_vals)
    i0 = int(np.argmin(np.abs(r_vals)))

    def rhs(state):
        p, w = state[:2], state[2:]
        gam = _christoffel(chart, p)
        return np.concatenate([w, -np.einsum("kij,i,j->k", gam, w, w)])

    uv = np.empty((len(r_vals), ns, 2))
    uv_r = np.empty_like(uv)
    tangents = curve.tangents
    for j in range(ns):
        p0 = curve.uv[j]
        n = chart.normal(p0)
        w_amb = -np.cross(n, tangents[j])
        w0 = np.linalg.lstsq(chart.jacobian(p0), w_amb, rcond=None)[0]
        y0 = np.concatenate([p0, w0])
        fwd = _rk4(rhs, y0, r_vals[i0:])
        bwd = _rk4(rhs, y0, r_vals[i0::-1])[::-1]
        uv[i0:, j], uv_r[i0:, j] = fwd[:, :2], fwd[:, 2:]
        uv[:i0 + 1, j], uv_r[:i0 + 1, j] = bwd[:, :2], bwd[:, 2:]
    for corner in (uv[0, 0], uv[0, -1], uv[-1, 0], uv[-1, -1]):
        if not chart.in_domain(corner):
            raise ValueError("geodesic family leaves the chart domain; "
                             "shrink r_span")
    return AdaptedFrame(chart, curve.field, r_vals, curve.s_vals, uv, uv_r)


def frame_fields(frame: AdaptedFrame, band: BandCurve) -> AdaptedFrame:
    """Fill the frame components, inclination angle and boundary energy.

    In place; returns the frame for chaining.  Raises AssumptionError if
    the inclination leaves (0, pi/2) anywhere on the patch.
    """
    b = frame.field.field(frame.gamma)
    normb = np.linalg.norm(b, axis=-1)
    frame.alpha = np.einsum("ijk,ijk->ij", frame.gamma_s, frame.gamma_s)
    frame.B1 = np.einsum("ijk,ijk->ij", b, frame.gamma_r)
    frame.B2 = np.einsum("ijk,ijk->ij", b, frame.gamma_s) / frame.alpha
    frame.B3 = -np.einsum("ijk,ijk->ij", b, frame.normal)
    sin_theta = -frame.B3 / normb
    if np.any(sin_theta <= 0.0) or np.any(sin_theta >= 1.0):
        raise AssumptionError(
            "field inclination leaves (0, pi/2) on the patch: "
            f"sin(theta) range [{sin_theta.min():.3g}, {sin_theta.max():.3g}]")
    frame.theta = np.arcsin(sin_theta)
    frame.beta = normb * band(frame.theta)
    frame.band = band
    return frame


def F_integral(frame: AdaptedFrame) -> np.ndarray:
    """Boundary primitive F(r, s) of sqrt(alpha) * B3 along r, zero at r=0."""
    if frame.B3 is None:
        raise ValueError("frame fields not filled; call frame_fields first")
    integrand = np.sqrt(frame.alpha) * frame.B3
    cum = cumulative_simpson(integrand, x=frame.r_grid, axis=0, initial=0.0)
    frame.F = cum - cum[frame.i_r0]
    return frame.F
