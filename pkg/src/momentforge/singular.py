"""Singular values of coordinate projections restricted to the lifted surface.

The projection to one coordinate behaves like a fold over the region
closure, so its singular values downstairs are the critical values of that
coordinate on the strata of the closed region: nothing on the open interior,
constrained extrema on the bounding facets, and constrained extrema on the
pairwise intersection curves.  For the preset families every facet is a
plane or a coordinate-axis cylinder, and every pairwise curve is a line, a
circle, or a cylinder-cylinder curve sharing exactly one cross coordinate,
all of which admit closed forms.  A dense parametric sweep serves as the
independent fallback and cross-check.

An optional half-space clip restricts the surface to one side of a
coordinate hyperplane; clipping can only drop singular values, never add
them, and the image interval shrinks to the clipped range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .arrangement import ArrangementSpec, classify_point

MERGE_TOL = 1e-9


class SingularError(ValueError):
    pass


class UnsupportedStratumError(SingularError):
    pass


@dataclass(frozen=True)
class SingularValue:
    value: float
    witness: tuple[float, ...]
    stratum: str


@dataclass(frozen=True)
class SingularValueReport:
    axis: int
    clip: Optional[tuple[int, float]]
    values: tuple[SingularValue, ...]
    image_interval: tuple[float, float]
    discarded: tuple[SingularValue, ...]

    @property
    def value_list(self) -> list[float]:
        return [sv.value for sv in self.values]


@dataclass(frozen=True)
class _Plane:
    """Linear facet normal.x + offset = 0."""
    normal: tuple[Fraction, ...]
    offset: Fraction
    source: int


@dataclass(frozen=True)
class _Cylinder:
    """Quadric cylinder: circle in coordinates ``coords``, invariant along
    the remaining axes."""
    coords: tuple[int, int]
    center: tuple[Fraction, Fraction]
    r2: Fraction
    source: int


def _classify_surfaces(spec: ArrangementSpec):
    out = []
    for j in range(1, spec.colors.l1 + 1):
        p = spec.poly(j)
        d = p.as_dict()
        deg = p.degree
        zero = (0,) * spec.n
        if deg == 1:
            normal = []
            for i in range(spec.n):
                e = tuple(1 if k == i else 0 for k in range(spec.n))
                normal.append(d.get(e, Fraction(0)))
            out.append(_Plane(tuple(normal), d.get(zero, Fraction(0)), j))
            continue
        if deg != 2:
            raise UnsupportedStratumError(f"hypersurface {j} has degree {deg}")
        quad, lead = [], None
        for i in range(spec.n):
            e2 = tuple(2 if k == i else 0 for k in range(spec.n))
            c = d.get(e2, Fraction(0))
            if c != 0:
                quad.append(i)
                if lead is None:
                    lead = c
                elif c != lead:
                    raise UnsupportedStratumError(f"hypersurface {j}: anisotropic quadric")
        for i in range(spec.n):
            for k in range(i + 1, spec.n):
                e = tuple(1 if m in (i, k) else 0 for m in range(spec.n))
                if d.get(e):
                    raise UnsupportedStratumError(f"hypersurface {j}: quadric cross terms")
        if len(quad) != 2:
            raise UnsupportedStratumError(
                f"hypersurface {j}: quadric is not a two-coordinate cylinder")
        i1, i2 = quad
        for i in range(spec.n):
            if i in quad:
                continue
            e1 = tuple(1 if k == i else 0 for k in range(spec.n))
            if d.get(e1):
                raise UnsupportedStratumError(f"hypersurface {j}: drifting quadric")
        lin1 = d.get(tuple(1 if k == i1 else 0 for k in range(spec.n)), Fraction(0))
        lin2 = d.get(tuple(1 if k == i2 else 0 for k in range(spec.n)), Fraction(0))
        c0 = d.get(zero, Fraction(0))
        cx = -lin1 / (2 * lead)
        cy = -lin2 / (2 * lead)
        r2 = cx * cx + cy * cy - c0 / lead
        if r2 <= 0:
            raise UnsupportedStratumError(f"hypersurface {j}: empty cylinder")
        out.append(_Cylinder((i1, i2), (cx, cy), r2, j))
    return out


def _in_closure(spec, point, tol=1e-7) -> bool:
    kind, _ = classify_point(spec, point, tol)
    return kind != "outside"


def _scan_witness(spec, base: Sequence[float], free_axes: Sequence[int],
                  span: float) -> Optional[tuple[float, ...]]:
    """Find a closure point on an affine slice of a stratum by scanning the
    free coordinates over the scenario span."""
    base = np.asarray(base, dtype=float)
    if not free_axes:
        pt = tuple(float(c) for c in base)
        return pt if _in_closure(spec, pt) else None
    axis = free_axes[0]
    for t in np.linspace(-span, span, 81):
        base2 = base.copy()
        base2[axis] = t
        pt = _scan_witness(spec, base2, free_axes[1:], span)
        if pt is not None:
            return pt
    return None


def _sqrt_fr(v: Fraction):
    num = math.isqrt(v.numerator)
    den = math.isqrt(v.denominator)
    if num * num == v.numerator and den * den == v.denominator:
        return Fraction(num, den)
    return math.sqrt(float(v))


def _facet_criticals(spec, surfaces, axis0: int, span: float):
    out = []
    for s in surfaces:
        if isinstance(s, _Plane):
            nz = [i for i, a in enumerate(s.normal) if a != 0]
            if nz == [axis0]:
                level = -s.offset / s.normal[axis0]
                base = [0.0] * spec.n
                base[axis0] = float(level)
                pt = _scan_witness(spec, base,
                                   [i for i in range(spec.n) if i != axis0], span)
                out.append((float(level), pt, f"facet S{s.source}"))
        else:
            if axis0 not in s.coords:
                continue
            k = s.coords.index(axis0)
            r = _sqrt_fr(s.r2)
            for sgn in (-1, 1):
                level = float(s.center[k]) + sgn * float(r)
                base = [0.0] * spec.n
                base[axis0] = level
                base[s.coords[1 - k]] = float(s.center[1 - k])
                pt = _scan_witness(spec, base,
                                   [i for i in range(spec.n) if i not in s.coords],
                                   span)
                out.append((level, pt, f"facet S{s.source}"))
    return out


def _solve_on_plane(plane: _Plane, base: list[float], nz: list[int]) -> list[float]:
    residual = float(plane.offset) + sum(float(plane.normal[i]) * base[i]
                                         for i in range(len(base)))
    base = list(base)
    base[nz[0]] -= residual / float(plane.normal[nz[0]])
    return base


def _plane_cylinder_lines(plane: _Plane, cyl: _Cylinder, n: int):
    """Axis-parallel intersection lines of a plane containing the cylinder
    axis direction; empty when the plane is oblique to the cross plane."""
    i1, i2 = cyl.coords
    if any(plane.normal[i] != 0 for i in range(n) if i not in (i1, i2)):
        return []
    a1, a2 = plane.normal[i1], plane.normal[i2]
    cx, cy = cyl.center
    f = a1 * cx + a2 * cy + plane.offset
    n2 = a1 * a1 + a2 * a2
    t2 = cyl.r2 / n2 - (f * f) / (n2 * n2)
    if t2 < 0:
        return []
    t = float(_sqrt_fr(t2)) if isinstance(t2, Fraction) else math.sqrt(t2)
    fu = float(cx - f * a1 / n2)
    fv = float(cy - f * a2 / n2)
    lines = []
    for sgn in ((0,) if t == 0 else (-1, 1)):
        base = [0.0] * n
        base[i1] = fu + sgn * float(a2) * t
        base[i2] = fv - sgn * float(a1) * t
        lines.append(base)
    return lines


def _circle_circle_points(c1: _Cylinder, c2: _Cylinder, n: int):
    du = 2 * (c2.center[0] - c1.center[0])
    dv = 2 * (c2.center[1] - c1.center[1])
    if du == 0 and dv == 0:
        return []
    k = (c1.r2 - c1.center[0] ** 2 - c1.center[1] ** 2) \
        - (c2.r2 - c2.center[0] ** 2 - c2.center[1] ** 2)
    plane = _Plane(tuple(du if i == c1.coords[0] else dv if i == c1.coords[1]
                         else Fraction(0) for i in range(n)), k, c1.source)
    return _plane_cylinder_lines(plane, c1, n)


def _cyl_cyl_criticals(spec, c1: _Cylinder, c2: _Cylinder, axis0: int, span: float):
    shared = set(c1.coords) & set(c2.coords)
    out = []
    if c1.coords == c2.coords:
        for base in _circle_circle_points(c1, c2, spec.n):
            if axis0 in c1.coords:
                pt = _scan_witness(spec, base, [i for i in range(spec.n)
                                                if i not in c1.coords], span)
                out.append((base[axis0], pt, f"curve S{c1.source}&S{c2.source}"))
        return out
    if len(shared) != 1:
        return out
    s = shared.pop()
    if axis0 in c2.coords and axis0 not in c1.coords:
        c1, c2 = c2, c1
    if axis0 not in c1.coords or axis0 in c2.coords:
        return out
    k_axis = c1.coords.index(axis0)
    k_s1 = c1.coords.index(s)
    k_s2 = c2.coords.index(s)
    other2 = c2.coords[1 - k_s2]
    r2_root = _sqrt_fr(c2.r2)
    s_candidates = {c1.center[k_s1], c2.center[k_s2] - r2_root,
                    c2.center[k_s2] + r2_root}
    for s_val in sorted(s_candidates, key=float):
        d1 = c1.r2 - (s_val - c1.center[k_s1]) ** 2
        d2 = c2.r2 - (s_val - c2.center[k_s2]) ** 2
        if d1 < 0 or d2 < 0:
            continue
        for sgn1 in (-1, 1):
            axis_val = float(c1.center[k_axis]) + sgn1 * math.sqrt(float(d1))
            for sgn2 in (-1, 1):
                base = [0.0] * spec.n
                base[axis0] = axis_val
                base[s] = float(s_val)
                base[other2] = float(c2.center[1 - k_s2]) + sgn2 * math.sqrt(float(d2))
                free = [i for i in range(spec.n) if i not in {axis0, s, other2}]
                pt = _scan_witness(spec, base, free, span)
                if pt is not None:
                    out.append((axis_val, pt, f"curve S{c1.source}&S{c2.source}"))
    return out


def _pair_criticals(spec, s1, s2, axis0: int, span: float):
    out = []
    if isinstance(s1, _Plane) and isinstance(s2, _Plane):
        if spec.n != 3:
            return out
        n1 = np.array([float(v) for v in s1.normal])
        n2 = np.array([float(v) for v in s2.normal])
        d = np.cross(n1, n2)
        if np.allclose(d, 0) or abs(d[axis0]) > 1e-12:
            return out
        sol, *_ = np.linalg.lstsq(np.vstack([n1, n2]),
                                  -np.array([float(s1.offset), float(s2.offset)]),
                                  rcond=None)
        dn = d / np.linalg.norm(d)
        pt = None
        for t in np.linspace(-span, span, 161):
            cand = tuple(sol + t * dn)
            if _in_closure(spec, cand):
                pt = cand
                break
        out.append((float(sol[axis0]), pt, f"curve S{s1.source}&S{s2.source}"))
        return out
    if isinstance(s1, _Cylinder) and isinstance(s2, _Cylinder):
        return _cyl_cyl_criticals(spec, s1, s2, axis0, span)
    plane, cyl = (s1, s2) if isinstance(s1, _Plane) else (s2, s1)
    nz = [i for i, a in enumerate(plane.normal) if a != 0]
    if all(i not in cyl.coords for i in nz):
        # plane transversal to the cylinder axis: cross circle at the plane
        if axis0 not in cyl.coords:
            return out
        k = cyl.coords.index(axis0)
        r = _sqrt_fr(cyl.r2)
        for sgn in (-1, 1):
            level = float(cyl.center[k]) + sgn * float(r)
            base = [0.0] * spec.n
            base[axis0] = level
            base[cyl.coords[1 - k]] = float(cyl.center[1 - k])
            base = _solve_on_plane(plane, base, nz)
            free = [i for i in range(spec.n) if i not in cyl.coords and i not in nz]
            pt = _scan_witness(spec, base, free, span)
            out.append((level, pt, f"curve S{plane.source}&S{cyl.source}"))
        return out
    # plane parallel to the cylinder axis: axis-parallel intersection lines
    lines = _plane_cylinder_lines(plane, cyl, spec.n)
    for base in lines:
        if axis0 in cyl.coords or axis0 in nz:
            free = [i for i in range(spec.n) if i not in cyl.coords and i not in nz]
            pt = _scan_witness(spec, base, free, span)
            out.append((float(base[axis0]), pt,
                        f"curve S{plane.source}&S{cyl.source}"))
    if not lines and axis0 in cyl.coords:
        # oblique plane: the multiplier on the plane normal vanishes, so the
        # cross coordinate other than the axis pins to the circle center and
        # the extrema coincide with the facet levels, restricted to the plane
        k = cyl.coords.index(axis0)
        other = cyl.coords[1 - k]
        if plane.normal[other] == 0 or any(
                plane.normal[i] != 0 for i in range(spec.n)
                if i not in cyl.coords):
            r = _sqrt_fr(cyl.r2)
            for sgn in (-1, 1):
                base = [0.0] * spec.n
                base[axis0] = float(cyl.center[k]) + sgn * float(r)
                base[other] = float(cyl.center[1 - k])
                if plane.normal[axis0] == 0:
                    base = _solve_on_plane(plane, base,
                                           [i for i in nz if i != axis0])
                free = [i for i in range(spec.n)
                        if i not in cyl.coords and i not in nz]
                pt = _scan_witness(spec, base, free, span)
                out.append((float(cyl.center[k]) + sgn * float(r), pt,
                            f"curve S{plane.source}&S{cyl.source}"))
    return out


def singular_values(spec: ArrangementSpec, axis: int,
                    clip: Optional[tuple[int, float]] = None,
                    box: Optional[Sequence[tuple[float, float]]] = None
                    ) -> SingularValueReport:
    """Singular values of the coordinate projection on the lifted surface,
    found as constrained extrema of the coordinate on the boundary strata.

    ``axis`` is 1-based.  ``clip = (axis, threshold)`` drops witnesses with
    x_axis below the threshold and clips the image interval accordingly.
    Candidates whose witness search leaves the closed region are reported in
    ``discarded``, not silently ignored.
    """
    axis0 = axis - 1
    if not 0 <= axis0 < spec.n:
        raise SingularError(f"axis {axis} out of range")
    surfaces = _classify_surfaces(spec)
    if box is None and spec.param_meta and "box" in spec.param_meta:
        box = spec.param_meta["box"]
    span = max((max(abs(lo), abs(hi)) for lo, hi in box), default=10.0) \
        if box else 10.0

    raw = _facet_criticals(spec, surfaces, axis0, span)
    for i in range(len(surfaces)):
        for j in range(i + 1, len(surfaces)):
            raw.extend(_pair_criticals(spec, surfaces[i], surfaces[j], axis0, span))

    kept: list[SingularValue] = []
    discarded: list[SingularValue] = []
    for level, pt, stratum in raw:
        if pt is None:
            discarded.append(SingularValue(float(level), (), stratum))
            continue
        rec = SingularValue(float(level), tuple(float(c) for c in pt), stratum)
        kept.append(rec)
    if not kept:
        raise SingularError("no singular values found on the closed region")

    image_lo = min(sv.value for sv in kept)
    image_hi = max(sv.value for sv in kept)

    if clip is not None:
        caxis0 = clip[0] - 1
        threshold = float(clip[1])
        still = []
        for sv in kept:
            if sv.witness[caxis0] >= threshold - MERGE_TOL:
                still.append(sv)
            else:
                discarded.append(sv)
        kept = still
        if caxis0 == axis0:
            image_lo = max(image_lo, threshold)
        if not kept:
            raise SingularError("clipping removed every singular value")

    kept.sort(key=lambda sv: sv.value)
    merged: list[SingularValue] = []
    for sv in kept:
        if merged and abs(sv.value - merged[-1].value) <= MERGE_TOL:
            continue
        merged.append(sv)
    return SingularValueReport(axis, clip, tuple(merged),
                               (float(image_lo), float(image_hi)),
                               tuple(discarded))


def singular_values_sampled(spec: ArrangementSpec, axis: int,
                            samples: int = 4096) -> list[float]:
    """Independent fallback: dense parameter sweeps of the stratum curves
    with local-extremum detection at closure points."""
    axis0 = axis - 1
    surfaces = _classify_surfaces(spec)
    box = spec.param_meta.get("box") if spec.param_meta else None
    span = max((max(abs(lo), abs(hi)) for lo, hi in box), default=10.0) \
        if box else 10.0
    values: list[float] = []

    def consider(pts: np.ndarray, cyclic: bool):
        vals = pts[:, axis0]
        member = np.array([_in_closure(spec, tuple(p)) for p in pts])
        rng = range(len(vals)) if cyclic else range(1, len(vals) - 1)
        for i in rng:
            a = (i - 1) % len(vals)
            b = (i + 1) % len(vals)
            if not (member[a] and member[i] and member[b]):
                continue
            if (vals[i] - vals[a]) * (vals[b] - vals[i]) <= 0:
                values.append(float(vals[i]))

    thetas = np.linspace(0, 2 * math.pi, samples, endpoint=False)
    # facet cross circles swept along the cylinder axis
    for s in surfaces:
        if not isinstance(s, _Cylinder) or axis0 not in s.coords:
            continue
        r = math.sqrt(float(s.r2))
        free_axes = [i for i in range(spec.n) if i not in s.coords]
        for t in np.linspace(-span, span, 33):
            pts = np.zeros((samples, spec.n))
            pts[:, s.coords[0]] = float(s.center[0]) + r * np.cos(thetas)
            pts[:, s.coords[1]] = float(s.center[1]) + r * np.sin(thetas)
            for i in free_axes:
                pts[:, i] = t
            consider(pts, cyclic=True)
    # cylinder-cylinder curves, parametrized on the second circle
    for c1 in surfaces:
        for c2 in surfaces:
            if c1 is c2 or not isinstance(c1, _Cylinder) or not isinstance(c2, _Cylinder):
                continue
            shared = set(c1.coords) & set(c2.coords)
            if len(shared) != 1:
                continue
            sh = shared.pop()
            if axis0 not in c1.coords or axis0 in c2.coords:
                continue
            k_s1 = c1.coords.index(sh)
            k_s2 = c2.coords.index(sh)
            k_a = c1.coords.index(axis0)
            other2 = c2.coords[1 - k_s2]
            r2f = math.sqrt(float(c2.r2))
            for sgn in (-1, 1):
                sv = float(c2.center[k_s2]) + r2f * np.sin(thetas)
                ov = float(c2.center[1 - k_s2]) + r2f * np.cos(thetas)
                d1 = float(c1.r2) - (sv - float(c1.center[k_s1])) ** 2
                ok = d1 >= 0
                pts = np.zeros((ok.sum(), spec.n))
                pts[:, sh] = sv[ok]
                pts[:, other2] = ov[ok]
                pts[:, axis0] = float(c1.center[k_a]) + sgn * np.sqrt(d1[ok])
                consider(pts, cyclic=False)
    # plane cuts transversal to a cylinder axis
    for plane in surfaces:
        if not isinstance(plane, _Plane):
            continue
        nz = [x for x, a in enumerate(plane.normal) if a != 0]
        for cyl in surfaces:
            if not isinstance(cyl, _Cylinder) or axis0 not in cyl.coords:
                continue
            if any(x in cyl.coords for x in nz):
                continue
            r = math.sqrt(float(cyl.r2))
            pts = np.zeros((samples, spec.n))
            pts[:, cyl.coords[0]] = float(cyl.center[0]) + r * np.cos(thetas)
            pts[:, cyl.coords[1]] = float(cyl.center[1]) + r * np.sin(thetas)
            base = _solve_on_plane(plane, [0.0] * spec.n, nz)
            for x in nz:
                pts[:, x] = base[x]
            consider(pts, cyclic=True)

    merged: list[float] = []
    for v in sorted(values):
        if merged and abs(v - merged[-1]) <= 1e-6:
            continue
        merged.append(v)
    return merged
