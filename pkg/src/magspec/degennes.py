"""Half-line oscillator family -d^2/dt^2 + (t - xi)^2 with Neumann wall.

The ground energy mu(xi) is computed on a staggered grid (nodes at
(k+1/2)*dt) so the no-flux condition at t=0 is the plain mirror stencil and
the matrix stays symmetric tridiagonal.  Minimizing mu over xi gives the
reference value theta0 used everywhere else as the small-angle limit of the
band function.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import minimize_scalar


def degennes_ground(xi: float, n: int = 1500, t_max: float = 18.0) -> float:
    """Smallest eigenvalue of -d2/dt2 + (t-xi)^2, Neumann at 0, Dirichlet at t_max."""
    if n < 200:
        raise ValueError("n must be >= 200")
    if t_max < 15.0:
        raise ValueError("t_max must be >= 15")
    dt = t_max / n
    t = (np.arange(n) + 0.5) * dt
    diag = 2.0 / dt**2 + (t - xi) ** 2
    diag[0] -= 1.0 / dt**2          # mirror ghost at the Neumann wall
    off = -np.ones(n - 1) / dt**2
    w = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))[0]
    return float(w[0])


def theta0_oracle(n: int = 1500, t_max: float = 18.0,
                  xatol: float = 1e-10) -> tuple[float, float]:
    """(theta0, xi0): golden-section minimum of the de Gennes ground energy."""
    res = minimize_scalar(
        lambda xi: degennes_ground(xi, n=n, t_max=t_max),
        bracket=(0.3, 0.8, 1.5),
        method="golden",
        options={"xtol": xatol},
    )
    return float(res.fun), float(res.x)
