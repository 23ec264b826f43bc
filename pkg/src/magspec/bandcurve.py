"""Tabulated band function theta -> e(theta) with monotone interpolation.

Samples are taken strictly inside (0, pi/2); the curve is extended evenly to
negative angles and clamped (with a warning) to [theta0, 1] outside the
sampled range.  Fritsch-Carlson monotone cubics keep the interpolant
increasing, which the raw samples are required to be up to a small slack.

Serialization: CSV (theta, energy) and JSON carrying the spline data plus
provenance (grid parameters, tolerances).
"""

from __future__ import annotations

import csv as _csv
import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .degennes import theta0_oracle
from .lupan import HalfPlaneGrid, adaptive_grid, lupan_energy

MONOTONICITY_SLACK = 1e-6


@dataclass
class BandCurve:
    thetas: np.ndarray
    energies: np.ndarray
    theta0_value: float
    provenance: dict = field(default_factory=dict)
    _spline: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        self.energies = np.asarray(self.energies, dtype=float)
        if self.thetas.size < 2:
            raise ValueError("need at least two samples")
        if np.any(np.diff(self.thetas) <= 0):
            raise ValueError("thetas must be strictly increasing")
        if np.any(np.diff(self.energies) <= -MONOTONICITY_SLACK):
            raise ValueError("energies must be increasing up to slack")
        self._spline = PchipInterpolator(self.thetas, self.energies)

    def __call__(self, theta) -> np.ndarray | float:
        th = np.abs(np.asarray(theta, dtype=float))   # even extension
        lo, hi = self.thetas[0], self.thetas[-1]
        if np.any(th < lo) or np.any(th > hi):
            warnings.warn(
                "band-curve evaluation outside the sampled range is clamped "
                f"to [{self.theta0_value}, 1]", stacklevel=2)
        out = self._spline(np.clip(th, lo, hi))
        out = np.where(th < lo, np.maximum(out, self.theta0_value), out)
        out = np.where(th > hi, np.minimum(out, 1.0), out)
        return float(out) if np.isscalar(theta) else out

    def derivative(self, theta) -> np.ndarray | float:
        """Analytic first derivative of the monotone spline (odd in theta)."""
        th = np.asarray(theta, dtype=float)
        d = self._spline.derivative()(np.clip(np.abs(th), self.thetas[0],
                                              self.thetas[-1]))
        d = d * np.sign(th)
        return float(d) if np.isscalar(theta) else d

    def theta_range(self) -> tuple[float, float]:
        return float(self.thetas[0]), float(self.thetas[-1])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = _csv.writer(f)
            w.writerow(["theta", "energy"])
            for th, e in zip(self.thetas, self.energies):
                w.writerow([f"{th:.17g}", f"{e:.17g}"])

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "theta0_value": self.theta0_value,
            "thetas": self.thetas.tolist(),
            "energies": self.energies.tolist(),
            "spline": {
                "kind": "fritsch-carlson-pchip",
                "breakpoints": self._spline.x.tolist(),
                "coefficients": self._spline.c.tolist(),
            },
            "provenance": self.provenance,
        }

    def to_json(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, path) -> "BandCurve":
        with open(path) as f:
            d = json.load(f)
        if "band_curve" in d:        # file with the run config embedded
            d = d["band_curve"]
        return cls(np.array(d["thetas"]), np.array(d["energies"]),
                   d["theta0_value"], provenance=d.get("provenance", {}))


def default_thetas(n: int = 25) -> np.ndarray:
    return np.linspace(0.02, np.pi / 2 - 0.01, n)


def build_band_curve(thetas, grid: HalfPlaneGrid | None = None,
                     spacing: float = 0.15, tol: float = 1e-8,
                     theta0: float | None = None,
                     threads: int = 1) -> BandCurve:
    """Sample e(theta) and wrap the results in a BandCurve.

    With ``grid=None`` every sample gets an adaptively sized box; a fixed grid
    is honored as given.  Samples at distinct theta are independent and run on
    a thread pool when ``threads > 1``.
    """
    thetas = np.asarray(thetas, dtype=float)
    if np.any(np.diff(thetas) <= 0):
        raise ValueError("thetas must be sorted strictly increasing")
    if np.any(thetas <= 0) or np.any(thetas >= np.pi / 2):
        raise ValueError("thetas must lie strictly inside (0, pi/2)")

    def one(th: float) -> float:
        g = grid if grid is not None else adaptive_grid(th, spacing=spacing)
        return lupan_energy(th, g, tol=tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            energies = np.array(list(ex.map(one, thetas)))
    else:
        energies = np.array([one(th) for th in thetas])

    if theta0 is None:
        theta0 = theta0_oracle()[0]
    prov = {
        "spacing": spacing,
        "tol": tol,
        "grid": None if grid is None else vars(grid).copy(),
        "n_samples": int(thetas.size),
    }
    return BandCurve(thetas, energies, theta0, provenance=prov)
