"""Polynomial vector potentials with exact symbolic curl.

Potentials are tables of monomial coefficients per component, so the magnetic
field is obtained by exact differentiation of the table (no numerical noise)
and gauge changes A -> A + grad(phi) with polynomial phi are exact as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Monomials = dict[tuple[int, int, int], float]


def poly_eval(p: Monomials, x: np.ndarray) -> np.ndarray:
    """Evaluate a monomial table at points x of shape (..., 3)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1])
    for (i, j, k), c in p.items():
        out = out + c * x[..., 0] ** i * x[..., 1] ** j * x[..., 2] ** k
    return out


def poly_diff(p: Monomials, axis: int) -> Monomials:
    out: Monomials = {}
    for mono, c in p.items():
        e = mono[axis]
        if e == 0:
            continue
        new = list(mono)
        new[axis] = e - 1
        key = tuple(new)
        out[key] = out.get(key, 0.0) + c * e
    return {k: v for k, v in out.items() if v != 0.0}


def poly_add(p: Monomials, q: Monomials) -> Monomials:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0.0) + v
    return {k: v for k, v in out.items() if v != 0.0}


def poly_grad(p: Monomials) -> tuple[Monomials, Monomials, Monomials]:
    return poly_diff(p, 0), poly_diff(p, 1), poly_diff(p, 2)


def poly_curl(a: tuple[Monomials, Monomials, Monomials]):
    a1, a2, a3 = a
    return (
        poly_add(poly_diff(a3, 1), {k: -v for k, v in poly_diff(a2, 2).items()}),
        poly_add(poly_diff(a1, 2), {k: -v for k, v in poly_diff(a3, 0).items()}),
        poly_add(poly_diff(a2, 0), {k: -v for k, v in poly_diff(a1, 1).items()}),
    )


@dataclass
class MagneticFieldSpec:
    """Vector potential given as coefficient tables; B is its exact curl."""

    name: str
    potential: tuple[Monomials, Monomials, Monomials] | None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.potential is not None:
            self.field_poly = poly_curl(self.potential)

    @classmethod
    def from_field_polys(cls, name: str,
                         field_poly: tuple[Monomials, Monomials, Monomials],
                         meta: dict | None = None) -> "MagneticFieldSpec":
        """Field given directly, without a potential (analysis-only specs)."""
        out = cls(name, None, meta=meta or {})
        out.field_poly = field_poly
        return out

    def vector_potential(self, x) -> np.ndarray:
        if self.potential is None:
            raise ValueError(f"field spec {self.name!r} carries no potential")
        x = np.asarray(x, dtype=float)
        return np.stack([poly_eval(p, x) for p in self.potential], axis=-1)

    def field(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.stack([poly_eval(p, x) for p in self.field_poly], axis=-1)

    def field_norm(self, x) -> np.ndarray:
        return np.linalg.norm(self.field(x), axis=-1)

    def gauge_shifted(self, phi: Monomials, name: str | None = None) -> "MagneticFieldSpec":
        """A -> A + grad(phi); leaves the field table identical."""
        if self.potential is None:
            raise ValueError(f"field spec {self.name!r} carries no potential")
        g = poly_grad(phi)
        pot = tuple(poly_add(p, gi) for p, gi in zip(self.potential, g))
        return MagneticFieldSpec(name or f"{self.name}+grad",
                                 pot, meta=dict(self.meta))

    def divergence_free(self) -> bool:
        d = poly_add(poly_add(poly_diff(self.field_poly[0], 0),
                              poly_diff(self.field_poly[1], 1)),
                     poly_diff(self.field_poly[2], 2))
        return len(d) == 0


def constant_field(theta0: float, norm: float = 1.0) -> MagneticFieldSpec:
    """Constant B = norm * (0, cos(theta0), -sin(theta0)).

    With the boundary {z=0} of the half-space z>0 (outward normal -e_z) the
    field makes angle theta0 with the boundary plane.
    """
    ct, st = norm * np.cos(theta0), norm * np.sin(theta0)
    a1 = {(0, 0, 1): ct}                  # A1 = ct * z
    a2 = {(1, 0, 0): -st}                 # A2 = -st * x
    return MagneticFieldSpec("constant", (a1, a2, {}),
                             meta={"theta0": theta0, "norm": norm})


def flat_quadratic_field(theta0: float = np.pi / 4, a: float = 0.5,
                         b: float = 1.0) -> MagneticFieldSpec:
    """Divergence-free field with a nondegenerate boundary-energy minimum.

    B = (0, cos(theta0)(1 + a x^2), -sin(theta0)(1 + a x^2 + b y^2)); on the
    boundary {z=0} the inclination is theta0 at the origin and the norm has
    its global minimum 1 there, so the boundary energy dips strictly below
    the bulk field minimum.
    """
    ct, st = np.cos(theta0), np.sin(theta0)
    a1 = {(0, 0, 1): ct, (2, 0, 1): ct * a}                 # z ct (1 + a x^2)
    a2 = {(1, 0, 0): -st, (3, 0, 0): -st * a / 3.0,          # -st(x + a x^3/3 + b x y^2)
          (1, 2, 0): -st * b}
    return MagneticFieldSpec("flat-quadratic", (a1, a2, {}),
                             meta={"theta0": theta0, "a": a, "b": b})


def field_preset(name: str, **kwargs) -> MagneticFieldSpec:
    presets = {"constant": constant_field, "flat-quadratic": flat_quadratic_field}
    if name not in presets:
        raise KeyError(f"unknown field preset {name!r}; "
                       f"known: {sorted(presets)}")
    return presets[name](**kwargs)
