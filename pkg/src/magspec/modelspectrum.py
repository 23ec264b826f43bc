"""Complex-shifted harmonic oscillator controlling the fine eigenvalue gaps.

The operator is (d0/2)(u^2 + (h D_u)^2) + sqrt(h)(alpha u + beta h D_u) plus
a constant offset.  Completing the square shows its spectrum is
(d0/2)(2n-1) h + offset - ((alpha^2 + beta^2)/(2 d0)) h, with eigenvalues
algebraic multiplicity one; when alpha^2 + beta^2 is real the whole spectrum
is real despite the operator being non-selfadjoint.  The numeric route
discretizes on a grid resolving the sqrt(h) oscillator scale and serves as a
cross-check of the closed form, including the resolvent-norm bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ModelSpectrum:
    d0: float
    p_eff0: float
    alpha: complex
    beta: complex
    h: float
    eigenvalues: np.ndarray
    meta: dict = field(default_factory=dict)


def shifted_offset(d0: float, p_eff0: float, alpha: complex, beta: complex,
                   h: float) -> complex:
    """Effective constant after completing the square."""
    return p_eff0 - (alpha**2 + beta**2) / (2.0 * d0) * h


def model_spectrum_formula(d0: float, p_eff0: float, alpha: complex,
                           beta: complex, h: float, n_max: int) -> ModelSpectrum:
    """lambda_n = (d0/2)(2n-1) h + completed-square offset, n = 1..n_max."""
    if d0 <= 0:
        raise ValueError("d0 must be positive")
    if h <= 0:
        raise ValueError("h must be positive")
    n = np.arange(1, n_max + 1)
    lam = (d0 / 2.0) * (2 * n - 1) * h + shifted_offset(d0, p_eff0, alpha, beta, h)
    return ModelSpectrum(d0, p_eff0, alpha, beta, h,
                         np.asarray(lam, dtype=np.complex128),
                         meta={"route": "formula"})


def _operator_matrix(d0: float, alpha: complex, beta: complex, h: float,
                     n_grid: int, n_max: int,
                     p_eff0: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Dense 4th-order FD matrix of the shifted oscillator on [-L, L]."""
    hbar = np.sqrt(h)
    shift = (abs(alpha) + abs(beta)) / d0 + 1.0
    half_width = hbar * (4.0 * np.sqrt(2.0 * n_max + 1.0) + shift + 5.0)
    u = np.linspace(-half_width, half_width, n_grid)
    du = u[1] - u[0]

    n = n_grid
    main = np.zeros((n, n), dtype=np.complex128)
    # 4th-order second derivative: (-1, 16, -30, 16, -1)/(12 du^2)
    c2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * du**2)
    # 4th-order first derivative: (1, -8, 0, 8, -1)/(12 du)
    c1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12.0 * du)
    for k, off in enumerate(range(-2, 3)):
        d = np.full(n - abs(off), 1.0)
        # (h D_u)^2 = -h^2 d2/du2 ; h D_u = -i h d/du
        main += np.diag(d * (-(h**2) * (d0 / 2.0) * c2[k]
                             + np.sqrt(h) * beta * h * (-1j) * c1[k]), off)
    main += np.diag((d0 / 2.0) * u**2 + np.sqrt(h) * alpha * u + p_eff0)
    return main, u


def model_spectrum_numeric(d0: float, alpha: complex, beta: complex, h: float,
                           n_grid: int = 0, n_max: int = 5,
                           p_eff0: float = 0.0,
                           residual_limit: float = 1e-5) -> ModelSpectrum:
    """Eigenvalues of the discretized operator, sorted by real part.

    ``n_grid=0`` picks a grid with ~40 points per oscillator standard
    deviation.  A residual check on the returned eigenpairs guards against an
    under-resolved grid.
    """
    if d0 <= 0 or h <= 0:
        raise ValueError("d0 and h must be positive")
    hbar = np.sqrt(h)
    if n_grid == 0:
        shift = (abs(alpha) + abs(beta)) / d0 + 1.0
        half_width = hbar * (4.0 * np.sqrt(2.0 * n_max + 1.0) + shift + 5.0)
        n_grid = int(np.ceil(2.0 * half_width / (hbar / 40.0)))

    mat, _ = _operator_matrix(d0, alpha, beta, h, n_grid, n_max, p_eff0)
    vals, vecs = np.linalg.eig(mat)
    order = np.argsort(vals.real)
    vals, vecs = vals[order], vecs[:, order]

    scale = max(abs(vals[n_max - 1]), d0 * h)
    for j in range(n_max):
        v = vecs[:, j] / np.linalg.norm(vecs[:, j])
        res = np.linalg.norm(mat @ v - vals[j] * v)
        if res > residual_limit * scale * 10:
            raise RuntimeError(
                f"eigenpair residual {res:.2e} indicates an under-resolved grid")

    return ModelSpectrum(d0, p_eff0, alpha, beta, h, vals[:n_max],
                         meta={"route": "numeric", "n_grid": n_grid})


def model_resolvent_bound_check(d0: float, alpha: complex, beta: complex,
                                h: float, mu_samples,
                                n_grid: int = 0, n_max: int = 8) -> dict:
    """Ratio resolvent-norm * spectral-distance over a set of mu samples.

    ``mu`` is in units of h relative to the completed-square offset: the
    resolvent is taken at z = offset + h*mu.  Samples closer than h/10 (in mu
    units, 0.1) to the discrete spectrum are skipped with a note.  For a
    selfadjoint configuration the ratio is exactly one.
    """
    if n_grid == 0:
        hbar = np.sqrt(h)
        shift = (abs(alpha) + abs(beta)) / d0 + 1.0
        half_width = hbar * (4.0 * np.sqrt(2.0 * n_max + 1.0) + shift + 5.0)
        n_grid = int(np.ceil(2.0 * half_width / (hbar / 25.0)))
    mat, _ = _operator_matrix(d0, alpha, beta, h, n_grid, n_max)
    vals = np.linalg.eigvals(mat)
    vals = vals[np.argsort(vals.real)][: 2 * n_max]
    offset = shifted_offset(d0, 0.0, alpha, beta, h)

    ratios = []
    skipped = []
    n = mat.shape[0]
    eye = np.eye(n)
    for mu in np.atleast_1d(np.asarray(mu_samples, dtype=np.complex128)):
        z = offset + h * mu
        dist = float(np.min(np.abs(z - vals)))
        if dist / h < 0.1:
            skipped.append({"mu": complex(mu),
                            "note": "closer than h/10 to the spectrum"})
            continue
        smin = np.linalg.svd(mat - z * eye, compute_uv=False)[-1]
        ratios.append({"mu": complex(mu), "dist": dist,
                       "resolvent_norm": float(1.0 / smin),
                       "ratio": float(dist / smin)})
    return {
        "ratios": ratios,
        "skipped": skipped,
        "max_ratio": max((r["ratio"] for r in ratios), default=float("nan")),
    }
