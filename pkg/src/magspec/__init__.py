"""Numerical toolkit for semiclassical spectral asymptotics of the
magnetic Neumann Laplacian on a half-space.

The pipeline: tabulate the half-plane band function, build adapted
boundary coordinates for a field/surface pair, certify the minimum of the
boundary energy density, and confront the resulting eigenvalue expansion
with a direct finite-difference solve.
"""

from .bandcurve import BandCurve, build_band_curve, default_thetas
from .betamin import BetaMinimum, compute_d0, minimize_beta
from .boxproblem import (BoxProblem, LocalizationReport, assemble,
                         localization_diagnostics, solve_lowest)
from .campaign import ValidationTable, analyze_patch, toy_validation
from .charts import (BoundaryChart, ellipsoid_chart, graph_chart,
                     plane_chart, sphere_chart, weingarten)
from .csr import CsrMatrix, from_dense, from_triplets, identity, matvec
from .degennes import degennes_ground, theta0_oracle
from .eigensolve import EigenReport, smallest_eigenpairs
from .expansion import ExpansionFit, Prediction, fit_expansion, predict_spectrum
from .fields import MagneticFieldSpec, constant_field, field_preset, \
    flat_quadratic_field
from .frame import (AdaptedFrame, AssumptionError, F_integral, FieldLineCurve,
                    field_line, frame_fields, geodesic_family)
from .gauge import GaugeA, frame_field_3d, gauge_potential, tubular_map, \
    tubular_metric
from .lupan import HalfPlaneGrid, adaptive_grid, lupan_energy, lupan_ground
from .modelspectrum import (ModelSpectrum, model_resolvent_bound_check,
                            model_spectrum_formula, model_spectrum_numeric)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
