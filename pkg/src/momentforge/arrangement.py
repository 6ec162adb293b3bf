"""Colored hypersurface arrangements and their lifted equation systems.

An arrangement is a family of polynomials f_1..f_l1 on R^n whose common
positivity region D = {all f_j > 0} is bounded by the zero sets S_j.  Each
hypersurface carries a color in 1..l2; the lifted system attaches one block
of sphere coordinates per color and cuts the surface

    F_i(x) = ||y_i||^2,   F_i = product of the f_j with color i,

whose projection back to x has image equal to the closure of D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .polynomial import Polynomial, p_eval, p_eval_exact, p_mul

DEFAULT_TOL = 1e-9


class ArrangementError(ValueError):
    pass


class NotInClosureError(ArrangementError):
    """A point fell outside the closed region where a lift was requested."""


@dataclass(frozen=True)
class ColorMap:
    """Surjective assignment of hypersurfaces 1..l1 to colors 1..l2, plus the
    sphere dimension attached to each color (0 means a 0-sphere pair)."""

    l1: int
    l2: int
    color_of: Mapping[int, int]
    sphere_dim: Mapping[int, int]

    def __post_init__(self):
        if self.l1 < 1 or self.l2 < 1:
            raise ArrangementError("l1 and l2 must be positive")
        if set(self.color_of.keys()) != set(range(1, self.l1 + 1)):
            raise ArrangementError("color_of must be defined on 1..l1")
        if set(self.color_of.values()) != set(range(1, self.l2 + 1)):
            raise ArrangementError("color_of must be surjective onto 1..l2")
        if set(self.sphere_dim.keys()) != set(range(1, self.l2 + 1)):
            raise ArrangementError("sphere_dim must be defined on 1..l2")
        if any(d < 0 for d in self.sphere_dim.values()):
            raise ArrangementError("sphere dimensions must be non-negative")

    def fiber(self, color: int) -> tuple[int, ...]:
        """Hypersurface indices carrying the given color, ascending."""
        return tuple(j for j in range(1, self.l1 + 1) if self.color_of[j] == color)


@dataclass(frozen=True)
class ArrangementSpec:
    """The region data: ambient dimension, bounding polynomials, colors and
    optional scenario parameters (levels, plane positions, bite centers)."""

    n: int
    polys: tuple[Polynomial, ...]
    colors: ColorMap
    param_meta: Optional[dict] = None

    def __post_init__(self):
        if len(self.polys) != self.colors.l1:
            raise ArrangementError("need exactly one polynomial per hypersurface index")
        for p in self.polys:
            if p.nvars != self.n:
                raise ArrangementError("every polynomial must live in n variables")

    def poly(self, j: int) -> Polynomial:
        """Polynomial of hypersurface j (1-based)."""
        return self.polys[j - 1]


@dataclass(frozen=True)
class LiftedSystem:
    """The lifted equations F_i(x) - ||y_i||^2 together with dimension counts.

    Ambient coordinates are ordered (x_1..x_n, y_1 block, ..., y_l2 block)
    where block i has sphere_dim(i)+1 coordinates.
    """

    base: ArrangementSpec
    color_polys: tuple[Polynomial, ...]
    ambient_dim: int
    manifold_dim: int
    equations: tuple[Polynomial, ...]

    @property
    def l2(self) -> int:
        return self.base.colors.l2

    def y_slice(self, color: int) -> slice:
        """Ambient coordinate slice of the y block for the given color."""
        start = self.base.n
        for i in range(1, color):
            start += self.base.colors.sphere_dim[i] + 1
        return slice(start, start + self.base.colors.sphere_dim[color] + 1)


def color_polynomial(spec: ArrangementSpec, i: int) -> Polynomial:
    """Product of the f_j over the color-i fiber."""
    if not 1 <= i <= spec.colors.l2:
        raise ArrangementError(f"color {i} out of range 1..{spec.colors.l2}")
    out = Polynomial.constant(spec.n, 1)
    for j in spec.colors.fiber(i):
        out = p_mul(out, spec.poly(j))
    return out


def lifted_system(spec: ArrangementSpec) -> LiftedSystem:
    """Assemble the color products, lifted equations and dimension counts."""
    cm = spec.colors
    ambient = spec.n + sum(cm.sphere_dim[i] + 1 for i in range(1, cm.l2 + 1))
    manifold = spec.n + sum(cm.sphere_dim[i] for i in range(1, cm.l2 + 1))
    color_polys = tuple(color_polynomial(spec, i) for i in range(1, cm.l2 + 1))
    equations = []
    offset = spec.n
    for i, F in enumerate(color_polys, start=1):
        eq = Polynomial.from_terms(
            ambient, [(c, e + (0,) * (ambient - spec.n)) for c, e in F.terms])
        for k in range(cm.sphere_dim[i] + 1):
            exps = [0] * ambient
            exps[offset + k] = 2
            eq = eq - Polynomial.from_terms(ambient, [(1, exps)])
        equations.append(eq)
        offset += cm.sphere_dim[i] + 1
    return LiftedSystem(spec, color_polys, ambient, manifold, tuple(equations))


def classify_point(spec: ArrangementSpec, x: Sequence[float], tol: float = DEFAULT_TOL):
    """Locate a point relative to the closed region.

    Returns ``("interior", None)``, ``("boundary", active)`` with the active
    hypersurface index set, or ``("outside", None)``.
    """
    if tol < 0:
        raise ArrangementError("tol must be non-negative")
    values = [p_eval(spec.poly(j), x) for j in range(1, spec.colors.l1 + 1)]
    if all(v > tol for v in values):
        return ("interior", None)
    if all(v >= -tol for v in values):
        active = frozenset(j for j, v in enumerate(values, start=1) if abs(v) <= tol)
        if active:
            return ("boundary", active)
    return ("outside", None)


def _nearest_sqrt(value: Fraction) -> float:
    """Double closest to sqrt(value) for a non-negative rational."""
    if value < 0:
        raise ValueError("negative radicand")
    if value == 0:
        return 0.0
    y = math.sqrt(float(value))
    if y == 0.0:
        return 0.0
    best, best_err = y, None
    for cand in (y, math.nextafter(y, 0.0), math.nextafter(y, math.inf)):
        err = abs(value - Fraction(cand) ** 2)
        if best_err is None or err < best_err:
            best, best_err = cand, err
    return best


def lift_point(ls: LiftedSystem, x: Sequence[float],
               signs: Sequence[int], tol: float = DEFAULT_TOL) -> np.ndarray:
    """Explicit section of the projection: y_i = signs_i * sqrt(F_i(x)).

    Only defined when every sphere dimension is 0.  Negative radicands within
    ``tol`` are clamped to zero; beyond that the point is not in the closure.
    """
    cm = ls.base.colors
    if any(cm.sphere_dim[i] != 0 for i in range(1, cm.l2 + 1)):
        raise ArrangementError("lift_point requires all sphere dimensions 0")
    if len(signs) != cm.l2:
        raise ArrangementError("need one sign per color")
    if any(s not in (-1, 1) for s in signs):
        raise ArrangementError("signs must be +1 or -1")
    out = np.empty(ls.ambient_dim)
    out[: ls.base.n] = np.asarray(x, dtype=float)
    for i, F in enumerate(ls.color_polys, start=1):
        val = p_eval_exact(F, x)
        if val < -tol:
            raise NotInClosureError(
                f"color {i} product is {float(val):.3e} < -tol at {tuple(x)}")
        y = _nearest_sqrt(max(val, Fraction(0)))
        out[ls.y_slice(i)] = signs[i - 1] * y if y != 0.0 else 0.0
    return out


def distinct_lifts(ls: LiftedSystem, x: Sequence[float], tol: float = DEFAULT_TOL):
    """All distinct lifted points over x (sphere dimensions all 0)."""
    cm = ls.base.colors
    seen: dict[bytes, np.ndarray] = {}
    for mask in range(2 ** cm.l2):
        signs = tuple(1 if mask & (1 << (i - 1)) else -1 for i in range(1, cm.l2 + 1))
        pt = lift_point(ls, x, signs, tol)
        key = pt.tobytes()
        seen.setdefault(key, pt)
    return [seen[k] for k in sorted(seen)]
