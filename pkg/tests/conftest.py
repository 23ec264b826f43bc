"""Shared fixtures.

The cheap synthetic band curve decouples geometry/minimization unit tests
from the half-plane eigenvalue sweep.  The expensive artifacts (the real
25-point band curve and the validation campaign) are built once per session,
with wall-clock build times recorded so the acceptance tests can assert the
runtime budgets.
"""

import time

import numpy as np
import pytest

from magspec.bandcurve import BandCurve, build_band_curve, default_thetas
from magspec.degennes import theta0_oracle

THETA0_REF = 0.5901060


@pytest.fixture(scope="session")
def synthetic_band() -> BandCurve:
    """Analytic increasing stand-in for the computed band function."""
    thetas = np.linspace(0.01, np.pi / 2 - 0.005, 40)
    energies = THETA0_REF + (1.0 - THETA0_REF) * np.sin(thetas) ** 2
    return BandCurve(thetas, energies, THETA0_REF,
                     provenance={"kind": "synthetic"})


@pytest.fixture(scope="session")
def theta0_reference() -> tuple[float, float]:
    return theta0_oracle()


@pytest.fixture(scope="session")
def band_curve_timed() -> tuple[BandCurve, float]:
    """The real 25-point band curve and its build wall time in seconds."""
    t0 = time.time()
    curve = build_band_curve(default_thetas())
    return curve, time.time() - t0


@pytest.fixture(scope="session")
def validation_timed(band_curve_timed):
    """Validation campaign over the default h schedule, with wall time."""
    from magspec.campaign import toy_validation

    curve, _ = band_curve_timed
    t0 = time.time()
    table = toy_validation([0.1, 0.07, 0.05], "flat-quadratic", curve)
    return table, time.time() - t0
