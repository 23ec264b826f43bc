"""Asymptotic eigenvalue predictions and their regression counterpart.

The low eigenvalues admit the expansion

    lambda_n(h) = beta_min h + C0 h^(3/2) + (gap (n - 1/2) + C1) h^2 + o(h^2)

with known beta_min and gap coefficient; C0 and C1 are nuisance constants
fitted from data, never predicted.  fit_expansion recovers the leading
coefficient by weighted least squares of lambda/h on {1, sqrt(h), h} and the
gap coefficient from consecutive-level differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .betamin import BetaMinimum


class IllConditionedFitError(RuntimeError):
    pass


@dataclass
class Prediction:
    """Per-(n, h) eigenvalue predictions from the expansion."""

    h_list: np.ndarray
    n_list: np.ndarray
    values: np.ndarray          # (len(n_list), len(h_list))
    known_terms_only: bool
    C0: float = 0.0
    C1: float = 0.0
    beta_min: float = 0.0
    gap_coeff: float = 0.0
    meta: dict = dc_field(default_factory=dict)

    def rows(self):
        """Yield (h, n, value, mode) rows for tabular output."""
        mode = "known-terms" if self.known_terms_only else "fitted"
        for i, n in enumerate(self.n_list):
            for j, h in enumerate(self.h_list):
                yield float(h), int(n), float(self.values[i, j]), mode


def predict_spectrum(bm: BetaMinimum, h_list, n_max: int,
                     fitted: tuple[float, float] | None = None) -> Prediction:
    """Expansion values for n = 1..n_max at each h.

    With fitted=(C0, C1) the nuisance terms are included; otherwise they
    are zero and the prediction is flagged known-terms-only.
    """
    h = np.asarray(h_list, dtype=float)
    n = np.arange(1, n_max + 1)
    c0, c1 = fitted if fitted is not None else (0.0, 0.0)
    vals = (bm.beta_min * h[None, :]
            + c0 * h[None, :] ** 1.5
            + (bm.gap_coeff * (n[:, None] - 0.5) + c1) * h[None, :] ** 2)
    return Prediction(h_list=h, n_list=n, values=vals,
                      known_terms_only=fitted is None, C0=c0, C1=c1,
                      beta_min=bm.beta_min, gap_coeff=bm.gap_coeff)


@dataclass
class ExpansionFit:
    beta_min_hat: float
    C0_hat: float
    c_terms: dict[int, float]       # per-n coefficient of h^2 in lambda/h fit
    gap_coeff_hat: float
    stderr: dict[str, float]
    condition: float
    meta: dict = dc_field(default_factory=dict)


def _wls(x: np.ndarray, y: np.ndarray, w: np.ndarray):
    sw = np.sqrt(w)
    a = x * sw[:, None]
    b = y * sw
    cond = np.linalg.cond(a)
    if cond > 1e8:
        raise IllConditionedFitError(
            f"design matrix condition {cond:.3g} exceeds 1e8; widen the "
            "h range of the samples")
    coef, res, *_ = np.linalg.lstsq(a, b, rcond=None)
    dof = max(len(y) - x.shape[1], 1)
    sigma2 = float(res[0]) / dof if res.size else 0.0
    cov = sigma2 * np.linalg.inv(a.T @ a)
    return coef, np.sqrt(np.diag(cov)), cond


def fit_expansion(samples) -> ExpansionFit:
    """Fit the expansion to (h, n, lambda) samples.

    Requires at least 3 distinct h per level n, all within one decade.
    The shared basis {1, sqrt(h), h} is fitted to lambda/h jointly across
    levels with a per-level h coefficient; the gap coefficient comes from
    the mean of (lambda_{n+1} - lambda_n) / h^2 regressions.
    """
    data = [(float(h), int(n), float(lam)) for h, n, lam in samples]
    levels = sorted({n for _, n, _ in data})
    by_level = {n: sorted((h, lam) for h, m, lam in data if m == n)
                for n in levels}
    for n, rows in by_level.items():
        hs = {h for h, _ in rows}
        if len(hs) < 3:
            raise ValueError(f"need >= 3 distinct h for level {n}, "
                             f"got {len(hs)}")
        if max(hs) / min(hs) > 10.0:
            raise ValueError("h values must lie within one decade")

    # joint fit of lambda/h on {1, sqrt(h)} shared + per-level h column
    rows = []
    rhs = []
    wts = []
    ncols = 2 + len(levels)
    for k, n in enumerate(levels):
        for h, lam in by_level[n]:
            row = np.zeros(ncols)
            row[0] = 1.0
            row[1] = np.sqrt(h)
            row[2 + k] = h
            rows.append(row)
            rhs.append(lam / h)
            wts.append(1.0 / h)        # favor small h where the model is exact
    coef, se, cond = _wls(np.array(rows), np.array(rhs), np.array(wts))
    beta_hat, c0_hat = float(coef[0]), float(coef[1])
    c_terms = {n: float(coef[2 + k]) for k, n in enumerate(levels)}

    gap_estimates = []
    for n, n2 in zip(levels, levels[1:]):
        if n2 != n + 1:
            continue
        common = sorted(set(h for h, _ in by_level[n])
                        & set(h for h, _ in by_level[n2]))
        lam_n = dict(by_level[n])
        lam_n2 = dict(by_level[n2])
        for h in common:
            gap_estimates.append((lam_n2[h] - lam_n[h]) / h ** 2)
    gap_hat = float(np.mean(gap_estimates)) if gap_estimates else float("nan")
    gap_se = (float(np.std(gap_estimates) / np.sqrt(len(gap_estimates)))
              if len(gap_estimates) > 1 else 0.0)
    return ExpansionFit(beta_min_hat=beta_hat, C0_hat=c0_hat,
                        c_terms=c_terms, gap_coeff_hat=gap_hat,
                        stderr={"beta_min": float(se[0]),
                                "C0": float(se[1]), "gap": gap_se},
                        condition=float(cond))
