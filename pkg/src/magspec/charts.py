"""Parameterized boundary patches with analytic derivatives.

Each chart provides the embedding x(p), its first and second derivatives,
and a consistently outward-oriented unit normal with analytic differential.
Presets: flat plane (optionally rotated in-plane), sphere, ellipsoid and a
polynomial graph z = f(x, y).  The interior of the domain always lies on the
side of -n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class DegenerateImmersionError(RuntimeError):
    pass


@dataclass
class BoundaryChart:
    name: str
    param: Callable[[np.ndarray], np.ndarray]        # p (2,) -> x (3,)
    jacobian: Callable[[np.ndarray], np.ndarray]     # p -> (3, 2)
    second: Callable[[np.ndarray], np.ndarray]       # p -> (3, 2, 2)
    domain: tuple[tuple[float, float], tuple[float, float]]
    orientation: float = 1.0                          # sign making du x dv outward
    meta: dict = field(default_factory=dict)

    def in_domain(self, p) -> bool:
        (a0, a1), (b0, b1) = self.domain
        return a0 <= p[0] <= a1 and b0 <= p[1] <= b1

    def normal(self, p) -> np.ndarray:
        j = self.jacobian(np.asarray(p, dtype=float))
        w = np.cross(j[:, 0], j[:, 1])
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            raise DegenerateImmersionError(f"chart {self.name}: immersion fails at {p}")
        return self.orientation * w / nw

    def normal_jacobian(self, p) -> np.ndarray:
        """(3, 2) array of [d n/dp1, d n/dp2], analytic."""
        p = np.asarray(p, dtype=float)
        j = self.jacobian(p)
        s = self.second(p)
        w = np.cross(j[:, 0], j[:, 1])
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            raise DegenerateImmersionError(f"chart {self.name}: immersion fails at {p}")
        n = self.orientation * w / nw
        out = np.empty((3, 2))
        for i in range(2):
            dw = np.cross(s[:, 0, i], j[:, 1]) + np.cross(j[:, 0], s[:, 1, i])
            dw = self.orientation * dw
            out[:, i] = (dw - n * np.dot(n, dw)) / nw
        return out

    def dn_ambient(self, p, u: np.ndarray) -> np.ndarray:
        """Weingarten differential dn applied to an ambient tangent vector u."""
        j = self.jacobian(np.asarray(p, dtype=float))
        coeff, *_ = np.linalg.lstsq(j, u, rcond=None)
        return self.normal_jacobian(p) @ coeff

    def closest_point(self, y: np.ndarray, p0: np.ndarray,
                      iterations: int = 3) -> np.ndarray:
        """Newton steps on the squared distance, started from chart point p0."""
        p = np.asarray(p0, dtype=float).copy()
        for _ in range(iterations):
            x = self.param(p)
            j = self.jacobian(p)
            s = self.second(p)
            r = x - y
            grad = j.T @ r
            hess = j.T @ j + np.einsum("k,kij->ij", r, s)
            try:
                step = np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(j, r, rcond=None)[0]
            p -= step
        return p


def weingarten(chart: BoundaryChart, p) -> np.ndarray:
    """Shape-operator matrix in the orthonormalized chart basis.

    Symmetric; its eigenvalues are the principal curvatures with the sign
    convention K(U, V) = <dn(U), V>.
    """
    p = np.asarray(p, dtype=float)
    j = chart.jacobian(p)
    e1 = j[:, 0] / np.linalg.norm(j[:, 0])
    e2 = j[:, 1] - np.dot(j[:, 1], e1) * e1
    n2 = np.linalg.norm(e2)
    if n2 < 1e-12:
        raise DegenerateImmersionError(f"chart {chart.name}: immersion fails at {p}")
    e2 /= n2
    frame = np.column_stack([e1, e2])
    dn = np.column_stack([chart.dn_ambient(p, e1), chart.dn_ambient(p, e2)])
    k = frame.T @ dn
    return 0.5 * (k + k.T)


def plane_chart(rotation: float = 0.0) -> BoundaryChart:
    """Boundary {z=0} of the half-space z > 0; outward normal is -e_z.

    ``rotation`` spins the (p1, p2) axes in the plane (used for
    frame-invariance checks).
    """
    c, s = np.cos(rotation), np.sin(rotation)
    rot = np.array([[c, -s], [s, c]])

    def param(p):
        q = rot @ np.asarray(p, dtype=float)
        return np.array([q[0], q[1], 0.0])

    def jac(p):
        return np.vstack([rot, np.zeros((1, 2))])

    def sec(p):
        return np.zeros((3, 2, 2))

    # du x dv = +e_z; outward (away from the interior z>0) is -e_z
    return BoundaryChart("plane", param, jac, sec,
                         ((-50.0, 50.0), (-50.0, 50.0)), orientation=-1.0,
                         meta={"rotation": rotation})


def sphere_chart(radius: float = 1.0, center=(0.0, 0.0, 0.0),
                 pole_axis: str = "z") -> BoundaryChart:
    """Sphere patch in longitude/latitude coordinates away from the poles."""
    center = np.asarray(center, dtype=float)
    axes = {"z": (0, 1, 2), "x": (1, 2, 0), "y": (2, 0, 1)}[pole_axis]

    def embed(v):
        out = np.empty(3)
        out[axes[0]], out[axes[1]], out[axes[2]] = v
        return out

    def param(p):
        u, v = p
        return center + radius * embed((np.cos(u) * np.cos(v),
                                        np.sin(u) * np.cos(v),
                                        np.sin(v)))

    def jac(p):
        u, v = p
        du = radius * embed((-np.sin(u) * np.cos(v), np.cos(u) * np.cos(v), 0.0))
        dv = radius * embed((-np.cos(u) * np.sin(v), -np.sin(u) * np.sin(v),
                             np.cos(v)))
        return np.column_stack([du, dv])

    def sec(p):
        u, v = p
        duu = radius * embed((-np.cos(u) * np.cos(v), -np.sin(u) * np.cos(v), 0.0))
        duv = radius * embed((np.sin(u) * np.sin(v), -np.cos(u) * np.sin(v), 0.0))
        dvv = radius * embed((-np.cos(u) * np.cos(v), -np.sin(u) * np.cos(v),
                              -np.sin(v)))
        out = np.empty((3, 2, 2))
        out[:, 0, 0], out[:, 0, 1] = duu, duv
        out[:, 1, 0], out[:, 1, 1] = duv, dvv
        return out

    return BoundaryChart(f"sphere(r={radius},axis={pole_axis})", param, jac, sec,
                         ((-1.2, 1.2), (-1.2, 1.2)), orientation=1.0,
                         meta={"radius": radius, "center": center.tolist()})


def ellipsoid_chart(a: float, b: float, c: float) -> BoundaryChart:
    """Ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1, longitude/latitude chart."""

    def param(p):
        u, v = p
        return np.array([a * np.cos(u) * np.cos(v), b * np.sin(u) * np.cos(v),
                         c * np.sin(v)])

    def jac(p):
        u, v = p
        du = np.array([-a * np.sin(u) * np.cos(v), b * np.cos(u) * np.cos(v), 0.0])
        dv = np.array([-a * np.cos(u) * np.sin(v), -b * np.sin(u) * np.sin(v),
                       c * np.cos(v)])
        return np.column_stack([du, dv])

    def sec(p):
        u, v = p
        duu = np.array([-a * np.cos(u) * np.cos(v), -b * np.sin(u) * np.cos(v), 0.0])
        duv = np.array([a * np.sin(u) * np.sin(v), -b * np.cos(u) * np.sin(v), 0.0])
        dvv = np.array([-a * np.cos(u) * np.cos(v), -b * np.sin(u) * np.cos(v),
                        -c * np.sin(v)])
        out = np.empty((3, 2, 2))
        out[:, 0, 0], out[:, 0, 1] = duu, duv
        out[:, 1, 0], out[:, 1, 1] = duv, dvv
        return out

    return BoundaryChart(f"ellipsoid({a},{b},{c})", param, jac, sec,
                         ((-1.2, 1.2), (-1.2, 1.2)), orientation=1.0,
                         meta={"semi_axes": [a, b, c]})


def graph_chart(f, fx, fy, fxx, fxy, fyy,
                domain=((-5.0, 5.0), (-5.0, 5.0)),
                orientation: float = -1.0) -> BoundaryChart:
    """Boundary z = f(x, y); by default the interior is z > f (outward -z)."""

    def param(p):
        x, y = p
        return np.array([x, y, f(x, y)])

    def jac(p):
        x, y = p
        return np.array([[1.0, 0.0], [0.0, 1.0], [fx(x, y), fy(x, y)]])

    def sec(p):
        x, y = p
        out = np.zeros((3, 2, 2))
        out[2] = np.array([[fxx(x, y), fxy(x, y)], [fxy(x, y), fyy(x, y)]])
        return out

    return BoundaryChart("graph", param, jac, sec, domain,
                         orientation=orientation)


CHART_PRESETS = {
    "flat": plane_chart,
    "sphere": sphere_chart,
    "ellipsoid": ellipsoid_chart,
}
