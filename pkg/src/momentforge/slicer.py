"""Planar slices of the positivity region by coordinate hyperplanes.

Restricting every bounding polynomial to a coordinate slice must give a line,
a circle, or a pair of parallel lines (a quadratic in one slice variable);
anything else is rejected.  The boundary of the sliced region is assembled by
exact line/circle intersection: discriminants are compared as rationals
whenever the slice data is rational, so tangencies are classified exactly.

Arcs are traversed with the region on the left; at junction points the
continuation is chosen by tangent angle with a curvature tie-break, which
resolves tangential contacts between boundary curves (pinch points) as well
as ordinary transversal corners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .arrangement import ArrangementSpec
from .polynomial import Polynomial, p_eval, p_eval_exact

Scalar = Union[Fraction, float]

POINT_KEY_TOL = 1e-9


class SlicerError(ValueError):
    pass


class UnsupportedCurveError(SlicerError):
    """A restricted polynomial is not a line, circle, or parallel line pair."""


class EmptyRegionError(SlicerError):
    pass


class UnboundedRegionError(SlicerError):
    pass


def _sqrt_scalar(value: Scalar) -> Scalar:
    """Square root, staying exact when the radicand is a rational square."""
    if isinstance(value, Fraction):
        if value < 0:
            raise ValueError("negative radicand")
        rn = math.isqrt(value.numerator)
        rd = math.isqrt(value.denominator)
        if rn * rn == value.numerator and rd * rd == value.denominator:
            return Fraction(rn, rd)
        return math.sqrt(value)
    return math.sqrt(value)


def _is_zero(value: Scalar, tol: float = 1e-12) -> bool:
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= tol


# ---------------------------------------------------------------------------
# slice primitives


@dataclass(frozen=True)
class LineCurve:
    """Zero set of a*u + b*v + c with the region on the side a*u+b*v+c >= 0."""

    a: Scalar
    b: Scalar
    c: Scalar
    source: int
    color: int

    def value(self, p) -> Scalar:
        return self.a * p[0] + self.b * p[1] + self.c

    @property
    def direction(self):
        # region-on-left travel direction; left normal is the gradient (a, b)
        return (self.b, -self.a)

    def param(self, p) -> Scalar:
        return self.b * (p[0]) - self.a * (p[1])

    def point_at(self, t: float) -> tuple[float, float]:
        a, b, c = float(self.a), float(self.b), float(self.c)
        n2 = a * a + b * b
        # foot of the origin plus t along the (unnormalized) direction
        return (-c * a / n2 + b * t / n2, -c * b / n2 - a * t / n2)

    def snap(self, p: tuple[float, float]) -> tuple[float, float]:
        a, b, c = float(self.a), float(self.b), float(self.c)
        f = a * p[0] + b * p[1] + c
        n2 = a * a + b * b
        return (p[0] - f * a / n2, p[1] - f * b / n2)


@dataclass(frozen=True)
class CircleCurve:
    """Circle (u-cx)^2 + (v-cy)^2 = r2; the region lies outside iff ``outside``."""

    cx: Scalar
    cy: Scalar
    r2: Scalar
    outside: bool
    source: int
    color: int

    def value(self, p) -> Scalar:
        d = (p[0] - self.cx) ** 2 + (p[1] - self.cy) ** 2 - self.r2
        return d if self.outside else -d

    @property
    def radius(self) -> float:
        return math.sqrt(float(self.r2))

    @property
    def ccw(self) -> bool:
        # walk counterclockwise when the region is inside, clockwise outside
        return not self.outside

    def angle_of(self, p) -> float:
        return math.atan2(float(p[1] - self.cy), float(p[0] - self.cx))

    def point_at(self, theta: float) -> tuple[float, float]:
        r = self.radius
        p = (float(self.cx) + r * math.cos(theta), float(self.cy) + r * math.sin(theta))
        return self.snap(p)

    def snap(self, p: tuple[float, float]) -> tuple[float, float]:
        cx, cy = float(self.cx), float(self.cy)
        dx, dy = p[0] - cx, p[1] - cy
        rho = math.hypot(dx, dy)
        if rho == 0.0:
            return p
        fac = math.sqrt(float(self.r2)) / rho
        return (cx + dx * fac, cy + dy * fac)


Curve = Union[LineCurve, CircleCurve]


# ---------------------------------------------------------------------------
# restriction of the arrangement to a slice


def restrict_spec(spec: ArrangementSpec, fixed: dict[int, Scalar]):
    """Restricted 2-variable polynomials (one per hypersurface) and the kept
    coordinate indices.  ``fixed`` maps 0-based ambient axes to values."""
    fixed_frac = {i: Fraction(v) if not isinstance(v, Fraction) else v
                  for i, v in fixed.items()}
    keep = [i for i in range(spec.n) if i not in fixed_frac]
    if len(keep) != 2:
        raise SlicerError("slice must leave exactly two free coordinates")
    restricted = tuple(spec.poly(j).restrict(fixed_frac)
                       for j in range(1, spec.colors.l1 + 1))
    return restricted, keep


def _classify_restriction(q: Polynomial, source: int, color: int) -> list[Curve]:
    """Turn a restricted polynomial q(u, v) >= 0 into boundary curves."""
    d = q.as_dict()
    if q.degree > 2 or d.get((1, 1)):
        raise UnsupportedCurveError(
            f"hypersurface {source}: slice curve is not a line or circle")
    A = d.get((2, 0), Fraction(0))
    C = d.get((0, 2), Fraction(0))
    Bu = d.get((1, 0), Fraction(0))
    Bv = d.get((0, 1), Fraction(0))
    D0 = d.get((0, 0), Fraction(0))
    if A == 0 and C == 0:
        if Bu == 0 and Bv == 0:
            if D0 < 0:
                raise EmptyRegionError(f"hypersurface {source} excludes the whole slice")
            return []  # constant non-negative: no constraint in this slice
        return [LineCurve(Bu, Bv, D0, source, color)]
    if A != 0 and C != 0:
        if A != C:
            raise UnsupportedCurveError(
                f"hypersurface {source}: non-circular conic in the slice")
        cx = -Bu / (2 * A)
        cy = -Bv / (2 * A)
        r2 = (Bu * Bu + Bv * Bv - 4 * A * D0) / (4 * A * A)
        if r2 < 0:
            if A < 0:
                raise EmptyRegionError(f"hypersurface {source} excludes the whole slice")
            return []  # positive definite: no constraint
        if r2 == 0:
            if A < 0:
                raise EmptyRegionError(f"hypersurface {source} pinches the slice to a point")
            return []
        return [CircleCurve(cx, cy, r2, outside=A > 0, source=source, color=color)]
    # parallel line pair: quadratic in exactly one slice variable
    if A != 0:
        quad, lin, var = A, Bu, 0
        if Bv != 0:
            raise UnsupportedCurveError(f"hypersurface {source}: parabolic slice curve")
    else:
        quad, lin, var = C, Bv, 1
        if Bu != 0:
            raise UnsupportedCurveError(f"hypersurface {source}: parabolic slice curve")
    disc = lin * lin - 4 * quad * D0
    if disc < 0:
        if quad < 0:
            raise EmptyRegionError(f"hypersurface {source} excludes the whole slice")
        return []
    if disc == 0:
        if quad < 0:
            raise EmptyRegionError(f"hypersurface {source} flattens the slice region")
        raise UnsupportedCurveError(
            f"hypersurface {source}: doubled line in the slice")
    root = _sqrt_scalar(disc) / (2 * quad) if isinstance(disc, Fraction) \
        else math.sqrt(disc) / (2 * float(quad))
    mid = -lin / (2 * quad)
    lo, hi = sorted((mid - root, mid + root))
    # local region side: between the roots when the quadratic opens downward
    sgn = 1 if quad < 0 else -1
    lines = []
    for pos, s in ((lo, sgn), (hi, -sgn)):
        coeff = (Fraction(s) if isinstance(pos, Fraction) else float(s))
        if var == 0:
            lines.append(LineCurve(coeff, 0 * coeff, -coeff * pos, source, color))
        else:
            lines.append(LineCurve(0 * coeff, coeff, -coeff * pos, source, color))
    return lines


# ---------------------------------------------------------------------------
# exact intersections


def _line_line(l1: LineCurve, l2: LineCurve) -> list[tuple[Scalar, Scalar]]:
    det = l1.a * l2.b - l2.a * l1.b
    if _is_zero(det):
        return []
    u = (-l1.c * l2.b + l2.c * l1.b) / det
    v = (-l1.a * l2.c + l2.a * l1.c) / det
    return [(u, v)]


def _line_circle(ln: LineCurve, ci: CircleCurve) -> list[tuple[Scalar, Scalar]]:
    a, b, c = ln.a, ln.b, ln.c
    n2 = a * a + b * b
    f = a * ci.cx + b * ci.cy + c
    fu = ci.cx - f * a / n2
    fv = ci.cy - f * b / n2
    t2 = (ci.r2 * n2 - f * f) / (n2 * n2)
    if isinstance(t2, Fraction):
        if t2 < 0:
            return []
        if t2 == 0:
            return [(fu, fv)]
    else:
        scale = max(abs(float(ci.r2)), 1.0)
        if t2 < -1e-14 * scale:
            return []
        if t2 <= 1e-14 * scale:
            return [(fu, fv)]
    t = _sqrt_scalar(t2)
    return [(fu + b * t, fv - a * t), (fu - b * t, fv + a * t)]


def _circle_circle(c1: CircleCurve, c2: CircleCurve) -> list[tuple[Scalar, Scalar]]:
    du = 2 * (c2.cx - c1.cx)
    dv = 2 * (c2.cy - c1.cy)
    if _is_zero(du) and _is_zero(dv):
        return []
    k = (c1.r2 - c1.cx ** 2 - c1.cy ** 2) - (c2.r2 - c2.cx ** 2 - c2.cy ** 2)
    radical = LineCurve(du, dv, k, c1.source, c1.color)
    return _line_circle(radical, c1)


def _intersections(p: Curve, q: Curve) -> list[tuple[Scalar, Scalar]]:
    if isinstance(p, LineCurve) and isinstance(q, LineCurve):
        return _line_line(p, q)
    if isinstance(p, LineCurve):
        return _line_circle(p, q)
    if isinstance(q, LineCurve):
        return _line_circle(q, p)
    return _circle_circle(p, q)


# ---------------------------------------------------------------------------
# arcs, corners, region


@dataclass(frozen=True)
class Arc:
    """Maximal boundary piece of the sliced region on one curve.

    Line arcs carry exact endpoints; circle arcs also carry center, squared
    radius and the angular span in region-on-left traversal order.
    ``closed_loop`` marks a full circle with no corners.
    """

    kind: str  # "segment" | "arc"
    source: int
    color: int
    p0: tuple[Scalar, Scalar]
    p1: tuple[Scalar, Scalar]
    curve: Curve
    theta0: float = 0.0
    theta1: float = 0.0  # traversal goes theta0 -> theta1 (ccw iff curve.ccw)
    closed_loop: bool = False

    @property
    def is_circle(self) -> bool:
        return self.kind == "arc"

    def sweep(self) -> float:
        """Unsigned angular span of a circle arc (2*pi for closed loops)."""
        if not self.is_circle:
            return 0.0
        if self.closed_loop:
            return 2 * math.pi
        if self.curve.ccw:
            return (self.theta1 - self.theta0) % (2 * math.pi) or 2 * math.pi
        return (self.theta0 - self.theta1) % (2 * math.pi) or 2 * math.pi

    def length(self) -> float:
        if self.is_circle:
            return self.curve.radius * self.sweep()
        return math.hypot(float(self.p1[0] - self.p0[0]), float(self.p1[1] - self.p0[1]))

    def point_fraction(self, s: float) -> tuple[float, float]:
        """Point at arc-length fraction s in [0, 1] along the traversal."""
        if self.is_circle:
            span = self.sweep()
            theta = self.theta0 + (span * s if self.curve.ccw else -span * s)
            return self.curve.point_at(theta)
        x0, y0 = float(self.p0[0]), float(self.p0[1])
        x1, y1 = float(self.p1[0]), float(self.p1[1])
        return (x0 + (x1 - x0) * s, y0 + (y1 - y0) * s)

    def start_direction(self) -> tuple[float, float]:
        if self.is_circle:
            r = self.curve.radius
            ux = math.cos(self.theta0)
            uy = math.sin(self.theta0)
            return (-uy, ux) if self.curve.ccw else (uy, -ux)
        d = (float(self.p1[0] - self.p0[0]), float(self.p1[1] - self.p0[1]))
        n = math.hypot(*d)
        return (d[0] / n, d[1] / n)

    def end_direction(self) -> tuple[float, float]:
        if self.is_circle:
            ux = math.cos(self.theta1)
            uy = math.sin(self.theta1)
            return (-uy, ux) if self.curve.ccw else (uy, -ux)
        return self.start_direction()

    def left_curvature(self) -> float:
        """Signed curvature of the traversal (positive bends left)."""
        if not self.is_circle:
            return 0.0
        r = self.curve.radius
        return 1.0 / r if self.curve.ccw else -1.0 / r


@dataclass(frozen=True)
class Corner:
    point: tuple[Scalar, Scalar]
    sources: frozenset[int]
    colors: frozenset[int]


@dataclass
class PlanarRegion:
    """Arc-decomposed slice of the closed region, plus meshing context.

    ``loops`` lists cyclic arc sequences with the region on the left (outer
    loops counterclockwise, holes clockwise, outer loops first).
    ``euler_char`` equals outer-loop count minus hole count.
    """

    slice_axes: tuple[int, ...]  # 1-based ambient axes that were fixed
    slice_values: tuple[float, ...]
    loops: list[list[Arc]]
    corners: list[Corner]
    euler_char: int
    constraints: tuple[Polynomial, ...]  # restricted 2-var polynomials
    sources: tuple[int, ...]
    colors: tuple[int, ...]
    keep_axes: tuple[int, ...]  # 0-based ambient axes of the slice plane
    ambient_dim: int
    tangencies: list[dict] = field(default_factory=list)

    @property
    def slice_axis(self) -> Optional[int]:
        return self.slice_axes[0] if len(self.slice_axes) == 1 else None

    @property
    def slice_value(self) -> Optional[float]:
        return self.slice_values[0] if len(self.slice_values) == 1 else None

    @property
    def arcs(self) -> list[Arc]:
        return [a for loop in self.loops for a in loop]

    @property
    def loop_count(self) -> int:
        return len(self.loops)

    def lift(self, p: Sequence[float]) -> tuple[float, ...]:
        """Embed a slice point back into ambient coordinates."""
        out = [0.0] * self.ambient_dim
        for axis, value in zip(self.slice_axes, self.slice_values):
            out[axis - 1] = value
        out[self.keep_axes[0]] = float(p[0])
        out[self.keep_axes[1]] = float(p[1])
        return tuple(out)

    def membership(self, p: Sequence[float], tol: float = 1e-9) -> bool:
        return all(p_eval(q, p) >= -tol for q in self.constraints)


def _point_key(p) -> tuple[int, int]:
    return (round(float(p[0]) / POINT_KEY_TOL), round(float(p[1]) / POINT_KEY_TOL))


def _membership_exact(restricted, p, skip: Optional[int] = None,
                      strict: bool = False, tol: float = 1e-9) -> bool:
    """Point-in-closed-region test, exact when the point is exact."""
    exact = all(isinstance(c, (Fraction, int)) for c in p)
    for idx, q in enumerate(restricted):
        if skip is not None and idx == skip:
            continue
        if exact:
            val = p_eval_exact(q, p)
            if strict and val <= 0:
                return False
            if not strict and val < 0:
                return False
        else:
            val = p_eval(q, (float(p[0]), float(p[1])))
            if strict and val <= tol:
                return False
            if not strict and val < -tol:
                return False
    return True


def planar_region(spec: ArrangementSpec, fixed: dict[int, Scalar],
                  tol: float = 1e-9) -> PlanarRegion:
    """Assemble the boundary of the sliced region as loops of labeled arcs.

    ``fixed`` maps 0-based ambient axes to slice values; exactly two
    coordinates must remain free.  Values are canonicalized to their double
    representation so downstream float evaluation agrees with the exact data.
    """
    fixed = {i: Fraction(float(v)) for i, v in fixed.items()}
    restricted, keep = restrict_spec(spec, fixed)
    curves: list[Curve] = []
    for j, q in enumerate(restricted, start=1):
        curves.extend(_classify_restriction(q, j, spec.colors.color_of[j]))
    if not curves:
        raise EmptyRegionError("no boundary curves in this slice")

    # split every curve at its intersections with all the others
    events: dict[int, list] = {k: [] for k in range(len(curves))}
    for k1 in range(len(curves)):
        for k2 in range(k1 + 1, len(curves)):
            for p in _intersections(curves[k1], curves[k2]):
                events[k1].append(p)
                events[k2].append(p)

    arcs: list[Arc] = []
    for k, curve in enumerate(curves):
        pts: dict[tuple, tuple] = {}
        for p in events[k]:
            pts.setdefault(_point_key(p), p)
        unique = list(pts.values())
        if isinstance(curve, LineCurve):
            if not unique:
                sample = curve.point_at(0.0)
                if _membership_exact(restricted, sample, skip=curve.source - 1,
                                     strict=True, tol=tol):
                    raise UnboundedRegionError(
                        f"hypersurface {curve.source} bounds an unbounded slice")
                continue
            unique.sort(key=lambda p: float(curve.param(p)))
            tmin = float(curve.param(unique[0]))
            tmax = float(curve.param(unique[-1]))
            n2 = float(curve.a) ** 2 + float(curve.b) ** 2
            step = math.sqrt(n2)  # one geometric unit in parameter scale
            for far_t in (tmin - step, tmax + step):
                sample = curve.point_at(far_t)
                if _membership_exact(restricted, sample, skip=curve.source - 1,
                                     strict=True, tol=tol):
                    raise UnboundedRegionError(
                        f"hypersurface {curve.source} bounds an unbounded slice")
            for p0, p1 in zip(unique, unique[1:]):
                mid = ((float(p0[0]) + float(p1[0])) / 2,
                       (float(p0[1]) + float(p1[1])) / 2)
                if not _membership_exact(restricted, mid, skip=curve.source - 1,
                                         strict=True, tol=tol):
                    continue
                # orient along the region-on-left direction of the line
                if curve.param(p0) > curve.param(p1):
                    p0, p1 = p1, p0
                arcs.append(Arc("segment", curve.source, curve.color, p0, p1, curve))
        else:
            if not unique:
                sample = curve.point_at(0.0)
                if _membership_exact(restricted, sample, skip=curve.source - 1,
                                     strict=True, tol=tol):
                    arcs.append(Arc("arc", curve.source, curve.color,
                                    sample, sample, curve, 0.0, 2 * math.pi,
                                    closed_loop=True))
                continue
            unique.sort(key=curve.angle_of)
            m = len(unique)
            for i in range(m):
                p0 = unique[i]
                p1 = unique[(i + 1) % m]
                a0 = curve.angle_of(p0)
                a1 = curve.angle_of(p1)
                span = (a1 - a0) % (2 * math.pi)
                if span == 0.0 and m > 1:
                    continue
                if m == 1:
                    span = 2 * math.pi
                amid = a0 + span / 2
                mid = curve.point_at(amid)
                if not _membership_exact(restricted, mid, skip=curve.source - 1,
                                         strict=True, tol=tol):
                    continue
                if curve.ccw:
                    arcs.append(Arc("arc", curve.source, curve.color,
                                    p0, p1, curve, a0, a0 + span))
                else:
                    arcs.append(Arc("arc", curve.source, curve.color,
                                    p1, p0, curve, a0 + span, a0))
    if not arcs:
        raise EmptyRegionError("slice region is empty at this level")

    loops = _assemble_loops(arcs)
    corners = _collect_corners(arcs)
    n_outer, n_holes, ordered = _orient_and_order(loops)
    region = PlanarRegion(
        slice_axes=tuple(sorted(i + 1 for i in fixed)),
        slice_values=tuple(float(fixed[i]) for i in sorted(fixed)),
        loops=ordered,
        corners=corners,
        euler_char=n_outer - n_holes,
        constraints=restricted,
        sources=tuple(range(1, spec.colors.l1 + 1)),
        colors=tuple(spec.colors.color_of[j] for j in range(1, spec.colors.l1 + 1)),
        keep_axes=tuple(keep),
        ambient_dim=spec.n,
    )
    _record_midline_tangencies(spec, region, curves)
    return region


def slice_region(spec: ArrangementSpec, axis: int, value) -> PlanarRegion:
    """Slice a 3-dimensional arrangement by the hyperplane x_axis = value."""
    if spec.n != 3:
        raise SlicerError("single-axis slicing requires a 3-dimensional arrangement")
    if not 1 <= axis <= spec.n:
        raise SlicerError(f"axis {axis} out of range")
    return planar_region(spec, {axis - 1: value})


def region_of_plane(spec: ArrangementSpec) -> PlanarRegion:
    """The region of a 2-dimensional arrangement, unsliced."""
    if spec.n != 2:
        raise SlicerError("region_of_plane requires a 2-dimensional arrangement")
    return planar_region(spec, {})


def _assemble_loops(arcs: list[Arc]) -> list[list[Arc]]:
    """Chain directed arcs into closed loops, region kept on the left.

    At each junction the outgoing arc is the first one clockwise from the
    reversed incoming direction; ties in tangent angle (tangential contacts)
    are broken by curvature, the leftmost-bending dart being angularly first.
    """
    starts: dict[tuple, list[int]] = {}
    for idx, arc in enumerate(arcs):
        if arc.closed_loop:
            continue
        starts.setdefault(_point_key(arc.p0), []).append(idx)

    def dart_key(direction, curvature):
        ang = math.atan2(direction[1], direction[0])
        return (ang, curvature)

    loops: list[list[Arc]] = [[a] for a in arcs if a.closed_loop]
    used = [a.closed_loop for a in arcs]
    for seed in range(len(arcs)):
        if used[seed]:
            continue
        loop = [arcs[seed]]
        used[seed] = True
        current = seed
        while True:
            arc = arcs[current]
            key = _point_key(arc.p1)
            candidates = starts.get(key, [])
            if not candidates:
                raise SlicerError(
                    f"open boundary chain at {tuple(map(float, arc.p1))}")
            din = arc.end_direction()
            rev = (-din[0], -din[1])
            rev_key = dart_key(rev, -arc.left_curvature())
            best, best_delta = None, None
            for cand in candidates:
                out = arcs[cand]
                k = dart_key(out.start_direction(), out.left_curvature())
                # clockwise distance from the reversed incoming dart
                delta = (rev_key[0] - k[0]) % (2 * math.pi)
                if delta < 1e-9 or delta > 2 * math.pi - 1e-9:
                    # tangent tie: order by curvature, more-leftward is earlier
                    delta = 2 * math.pi if k[1] >= rev_key[1] else 0.0
                    delta += (rev_key[1] - k[1]) * 1e-12
                if best_delta is None or delta < best_delta:
                    best, best_delta = cand, delta
            if used[best] and arcs[best] is loop[0]:
                break
            if used[best]:
                raise SlicerError("boundary arcs do not close into simple loops")
            loop.append(arcs[best])
            used[best] = True
            current = best
        loops.append(loop)
    return loops


def _collect_corners(arcs: list[Arc]) -> list[Corner]:
    info: dict[tuple, dict] = {}
    for arc in arcs:
        if arc.closed_loop:
            continue
        for p in (arc.p0, arc.p1):
            rec = info.setdefault(_point_key(p), {"point": p, "sources": set(),
                                                  "colors": set()})
            rec["sources"].add(arc.source)
            rec["colors"].add(arc.color)
    corners = [Corner(rec["point"], frozenset(rec["sources"]), frozenset(rec["colors"]))
               for rec in info.values()]
    corners.sort(key=lambda c: (float(c.point[0]), float(c.point[1])))
    return corners


def _loop_signed_area(loop: list[Arc]) -> float:
    area = 0.0
    samples = 24
    pts = []
    for arc in loop:
        for i in range(samples):
            pts.append(arc.point_fraction(i / samples))
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        area += x0 * y1 - x1 * y0
    return area / 2


def _orient_and_order(loops: list[list[Arc]]):
    outer, holes = [], []
    for loop in loops:
        if _loop_signed_area(loop) > 0:
            outer.append(loop)
        else:
            holes.append(loop)
    outer.sort(key=lambda lp: -abs(_loop_signed_area(lp)))
    holes.sort(key=lambda lp: -abs(_loop_signed_area(lp)))
    return len(outer), len(holes), outer + holes


def _record_midline_tangencies(spec: ArrangementSpec, region: PlanarRegion,
                               curves: list[Curve]):
    """Exact tangency of circle arcs with the scenario midline, kept as
    metadata only (the midline is not an arrangement hypersurface)."""
    meta = spec.param_meta or {}
    mid = meta.get("midline")
    if not mid:
        return
    ambient_axis, value = mid  # 1-based ambient axis held at the given value
    if (ambient_axis - 1) not in region.keep_axes:
        return
    idx = region.keep_axes.index(ambient_axis - 1)
    value = Fraction(value)
    for curve in curves:
        if not isinstance(curve, CircleCurve):
            continue
        coord = (curve.cx, curve.cy)[idx]
        if not isinstance(coord, Fraction) or not isinstance(curve.r2, Fraction):
            continue
        if (coord - value) ** 2 == curve.r2:
            touch = [curve.cx, curve.cy]
            touch[idx] = value
            region.tangencies.append({
                "source": curve.source,
                "point": (float(touch[0]), float(touch[1])),
                "kind": "midline",
            })
