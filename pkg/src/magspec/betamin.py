"""Certify the minimum of the boundary energy density on a patch.

The density beta(r, s) = |B| e(theta) is sampled on the adapted-frame grid;
a smooth interpolant supports Newton refinement of the minimizer, and the
Hessian is taken by central finite differences with Richardson
extrapolation.  The output packages everything the spectral expansion
needs: minimizer, minimum value, Hessian, inclination and the gap
coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .frame import AdaptedFrame, AssumptionError
from .gauge import tubular_map


class MinimumNotLocalizedError(RuntimeError):
    pass


@dataclass
class BetaMinimum:
    """Minimum data of the boundary energy density on a patch."""

    p0: np.ndarray              # (r, s) coordinates of the minimizer
    x0: np.ndarray              # ambient point
    beta_min: float
    b_min: float                # min |B| over the sampled patch closure
    hessian: np.ndarray         # 2x2, in the (r, s) frame coordinates
    theta0: float
    normB0: float
    d0: float
    gap_coeff: float
    grad_norm: float
    meta: dict = dc_field(default_factory=dict)


def compute_d0(bm: BetaMinimum) -> float:
    """Gap coefficient sqrt(det Hess) / (|B(x0)| sin(theta(x0)))."""
    det = float(np.linalg.det(bm.hessian))
    if det <= 0:
        raise AssumptionError("Hessian of the boundary energy is not positive")
    return float(np.sqrt(det) / (bm.normB0 * np.sin(bm.theta0)))


def _fd_hessian(f, p, step):
    h = np.empty((2, 2))
    f0 = f(p)
    for i in range(2):
        e = np.zeros(2)
        e[i] = step
        h[i, i] = (f(p + e) - 2 * f0 + f(p - e)) / step ** 2
    ex, ey = np.array([step, 0.0]), np.array([0.0, step])
    h[0, 1] = h[1, 0] = (f(p + ex + ey) - f(p + ex - ey)
                         - f(p - ex + ey) + f(p - ex - ey)) / (4 * step ** 2)
    return h


def _richardson_hessian(f, p, step):
    h1 = _fd_hessian(f, p, step)
    h2 = _fd_hessian(f, p, step / 2)
    return (4 * h2 - h1) / 3.0


def minimize_beta(frame: AdaptedFrame, t_max: float = 0.0,
                  grad_tol_rel: float = 1e-8) -> BetaMinimum:
    """Locate and certify the interior minimum of the boundary energy.

    Newton refinement starts from the best grid sample on a bicubic
    interpolant of the sampled density.  If t_max > 0, the bulk field
    minimum b_min is taken over the tubular box of that depth, otherwise
    over the boundary patch only.
    """
    if frame.beta is None:
        raise ValueError("frame fields not filled; call frame_fields first")
    r, s, beta = frame.r_grid, frame.s_grid, frame.beta
    spline = RectBivariateSpline(r, s, beta, kx=3, ky=3, s=0)

    def f(p):
        return spline(p[0], p[1]).item()

    i, j = np.unravel_index(np.argmin(beta), beta.shape)
    if not (2 <= i < len(r) - 2 and 2 <= j < len(s) - 2):
        raise MinimumNotLocalizedError(
            "minimum not localized in patch: best sample at grid index "
            f"({i}, {j}) is within 2 cells of the edge")
    def grad(p):
        return np.array([spline(p[0], p[1], dx=1).item(),
                         spline(p[0], p[1], dy=1).item()])

    step = min(np.diff(r).min(), np.diff(s).min())
    p = np.array([r[i], s[j]])
    for _ in range(60):
        g = grad(p)
        if np.linalg.norm(g) < grad_tol_rel * abs(f(p)):
            break
        h = np.array([[spline(p[0], p[1], dx=2).item(),
                       spline(p[0], p[1], dx=1, dy=1).item()],
                      [spline(p[0], p[1], dx=1, dy=1).item(),
                       spline(p[0], p[1], dy=2).item()]])
        try:
            delta = np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            delta = g * step
        norm = np.linalg.norm(delta)
        if norm > 3 * step:
            delta *= 3 * step / norm
        p = p - delta
        if not (r[2] <= p[0] <= r[-3] and s[2] <= p[1] <= s[-3]):
            raise MinimumNotLocalizedError(
                f"minimum not localized in patch: Newton iterate left "
                f"the interior at {tuple(p)}")
    grad_norm = float(np.linalg.norm(grad(p)))
    beta_min = f(p)
    hess = _richardson_hessian(f, p, step)
    hess = 0.5 * (hess + hess.T)
    eigs = np.linalg.eigvalsh(hess)
    if eigs.min() <= 1e-10:
        raise AssumptionError(
            "degenerate minimum of the boundary energy: Hessian eigenvalues "
            f"{eigs}")

    # interpolate the ambient position, angle and field norm at p0
    theta0 = RectBivariateSpline(r, s, frame.theta, s=0)(p[0], p[1]).item()
    if not 0.0 < theta0 < np.pi / 2:
        raise AssumptionError(f"inclination at the minimum is {theta0:.4f}, "
                              "outside (0, pi/2)")
    x0 = np.array([RectBivariateSpline(r, s, frame.gamma[:, :, k],
                                       s=0)(p[0], p[1]).item()
                   for k in range(3)])
    normB0 = float(np.linalg.norm(frame.field.field(x0)))

    if t_max > 0:
        t_grid = np.linspace(0.0, t_max, 9)
        pts, _ = tubular_map(frame, t_grid)
        norms = frame.field.field_norm(pts)
    else:
        norms = frame.field.field_norm(frame.gamma)
    b_min = 0.999 * float(norms.min())
    if beta_min >= b_min:
        raise AssumptionError(
            f"boundary energy minimum {beta_min:.6f} is not below the bulk "
            f"field minimum {b_min:.6f}")

    bm = BetaMinimum(p0=p, x0=x0, beta_min=beta_min, b_min=b_min,
                     hessian=hess, theta0=theta0, normB0=normB0,
                     d0=0.0, gap_coeff=0.0, grad_norm=grad_norm,
                     meta={"grid_step": step})
    bm.d0 = bm.gap_coeff = compute_d0(bm)
    return bm
