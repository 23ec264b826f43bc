"""End-to-end validation campaigns on the flat-boundary toy geometry.

For a field preset satisfying the working hypotheses, the campaign builds
the boundary energy analysis, solves the discretized operator for several
values of h, checks localization, and confronts the extrapolated
eigenvalues with the asymptotic expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .bandcurve import BandCurve
from .betamin import BetaMinimum, minimize_beta
from .boxproblem import (BoxProblem, LocalizationReport,
                         localization_diagnostics, solve_lowest)
from .charts import plane_chart
from .expansion import ExpansionFit, fit_expansion
from .fields import MagneticFieldSpec, field_preset
from .frame import F_integral, field_line, frame_fields, geodesic_family


class BoxTruncationError(RuntimeError):
    pass


@dataclass
class ValidationTable:
    """Campaign results: raw eigenvalues, fit, and comparison summary."""

    rows: list[tuple[float, int, float, float]]     # (h, n, lambda, residual)
    fit: ExpansionFit
    minimum: BetaMinimum
    localization: dict[float, LocalizationReport]
    comparison: dict[str, float]
    meta: dict = dc_field(default_factory=dict)

    def to_rows(self):
        for h, n, lam, res in self.rows:
            yield {"h": h, "n": n, "lambda": lam, "residual": res}


def analyze_patch(field: MagneticFieldSpec, band: BandCurve,
                  patch_radius: float = 1.2, grid_step: float = 0.06,
                  t_max: float = 0.5) -> BetaMinimum:
    """Boundary energy analysis of a field on the flat chart."""
    chart = plane_chart()
    span = (-patch_radius, patch_radius)
    curve = field_line(chart, field, (0.0, 0.0), span, step=grid_step)
    frame = geodesic_family(chart, curve, span, step=grid_step)
    frame_fields(frame, band)
    F_integral(frame)
    return minimize_beta(frame, t_max=t_max)


def box_for(h: float, field: MagneticFieldSpec,
            halfwidth: float = 2.0, depth_factor: float = 6.0,
            bottom_bc: str = "neumann") -> BoxProblem:
    """Box sized to enclose the localization region at this h."""
    depth = depth_factor * np.sqrt(h)
    delta = np.sqrt(h) / 6.2
    n1 = int(np.ceil(2 * halfwidth / delta)) - 1
    n3 = int(np.ceil(depth / delta))
    return BoxProblem(h=h, extents=(halfwidth, halfwidth, depth),
                      counts=(n1, n1, n3), gauge=field, bottom_bc=bottom_bc)


def toy_validation(h_list, field: MagneticFieldSpec | str,
                   band: BandCurve, n_levels: int = 2,
                   halfwidth: float = 2.0, tol: float = 1e-8,
                   wall_mass_limit: float = 1e-4) -> ValidationTable:
    """Solve the campaign and confront it with the expansion.

    Raises BoxTruncationError when an eigenfunction leaves more than
    wall_mass_limit of its mass near the lateral walls (enlarge the box).
    """
    if isinstance(field, str):
        field = field_preset(field)
    bm = analyze_patch(field, band)
    rows = []
    loc = {}
    for h in sorted(h_list, reverse=True):
        problem = box_for(h, field, halfwidth=halfwidth)
        report = solve_lowest(problem, n_levels, tol=tol)
        diag = localization_diagnostics(problem, report, x0=bm.x0[:2])
        worst = max(diag.wall_mass)
        if worst > wall_mass_limit:
            raise BoxTruncationError(
                f"eigenfunction mass {worst:.2e} near lateral walls at "
                f"h={h}; enlarge the box beyond halfwidth {halfwidth}")
        loc[h] = diag
        for n in range(1, n_levels + 1):
            rows.append((h, n, float(report.eigenvalues[n - 1]),
                         float(report.residual_norms[n - 1])))
    fit = fit_expansion([(h, n, lam) for h, n, lam, _ in rows])
    comparison = {
        "beta_min_band": bm.beta_min,
        "beta_min_fitted": fit.beta_min_hat,
        "leading_rel_err": abs(fit.beta_min_hat - bm.beta_min) / bm.beta_min,
        "gap_coeff_d0": bm.gap_coeff,
        "gap_coeff_fitted": fit.gap_coeff_hat,
    }
    if n_levels >= 2:
        hs = sorted({h for h, *_ in rows})
        gaps = []
        for h in hs:
            lam = {n: v for hh, n, v, _ in rows if hh == h}
            gaps.append(lam[2] - lam[1])
        slope = np.polyfit(np.log(hs), np.log(gaps), 1)[0]
        comparison["gap_exponent"] = float(slope)
    return ValidationTable(rows=rows, fit=fit, minimum=bm,
                           localization=loc, comparison=comparison,
                           meta={"halfwidth": halfwidth, "tol": tol})
