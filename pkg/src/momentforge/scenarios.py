"""Preset arrangements with resolved geometry and expected outcomes.

Every preset is generated from exact rational parameters, together with a
bounding box, a list of exact boundary points on each pairwise stratum (used
by the validator as an exhaustive check), the default slice producing the
preimage surface, and an expected-results record with per-field provenance
tags: ``paper`` marks externally claimed values the pipeline audits,
``derived`` marks values pinned by an independent oracle in this package.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .arrangement import ArrangementSpec, ColorMap
from .polynomial import Polynomial
from .slicer import Arc, CircleCurve, Corner, LineCurve, PlanarRegion


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioParams:
    """Parameters shared by the preset families.

    ``l`` counts hypersurfaces for the strip-with-bites families; ``a < b``
    are the two distinguished levels; ``s1 < s2`` the plane positions;
    ``p`` the bite centers; ``variant`` selects line or circle cuts for the
    corner-cut families.
    """

    name: str
    l: int = 4
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(1)
    s1: Optional[Fraction] = None
    s2: Optional[Fraction] = None
    p: Optional[tuple[Fraction, ...]] = None
    variant: str = "line"
    density: float = 0.1
    seed: int = 0

    def resolved(self) -> "ScenarioParams":
        """Fill default plane positions and bite centers from ``l``."""
        a, b = Fraction(self.a), Fraction(self.b)
        k = self.l - 3
        s1 = self.s1 if self.s1 is not None else -(2 * k + 2) * (b - a)
        s2 = self.s2 if self.s2 is not None else +(2 * k + 2) * (b - a)
        if self.p is not None:
            p = tuple(Fraction(v) for v in self.p)
        else:
            step = Fraction(5, 2) * (b - a)
            p = tuple(-(self.l - 4) * step + (j - 1) * step for j in range(1, k + 1))
        return ScenarioParams(self.name, self.l, a, b, Fraction(s1), Fraction(s2),
                              p, self.variant, self.density, self.seed)

    def check(self):
        a, b, s1, s2, p = self.a, self.b, self.s1, self.s2, self.p
        if not a < b:
            raise ScenarioError(f"need a < b, got a={a}, b={b}")
        k = self.l - 3
        if s2 - s1 <= 2 * k * (b - a):
            raise ScenarioError(f"need s2 - s1 > 2(l-3)(b-a): {s2}-{s1} vs {2*k*(b-a)}")
        if list(p) != sorted(set(p)):
            raise ScenarioError("bite positions p must be strictly increasing")
        if p:
            if p[0] - s1 <= b - a:
                raise ScenarioError(f"need p1 - s1 > b-a: {p[0]} - {s1}")
            if s2 - p[-1] <= b - a:
                raise ScenarioError(f"need s2 - p_last > b-a: {s2} - {p[-1]}")
            for lo, hi in zip(p, p[1:]):
                if hi - lo <= 2 * (b - a):
                    raise ScenarioError(f"need p_(j+1) - p_j > 2(b-a): {hi} - {lo}")


@dataclass(frozen=True)
class ExpectedResults:
    """Claimed pipeline outcomes with per-field provenance tags."""

    values: dict
    provenance: dict

    def get(self, key, default=None):
        return self.values.get(key, default)

    def items(self):
        return self.values.items()


@dataclass(frozen=True)
class Scenario:
    params: ScenarioParams
    spec: ArrangementSpec
    expected: ExpectedResults
    box: tuple[tuple[float, float], ...]
    corners: tuple[tuple[tuple[Fraction, ...], frozenset[int]], ...]
    default_slice: Optional[tuple[int, Fraction]]  # (1-based axis, value)
    singular_axis: Optional[int] = None
    singular_clip: Optional[tuple[int, Fraction]] = None

    @property
    def name(self) -> str:
        return self.params.name


def _plane_x1(shift: Fraction, sign: int) -> Polynomial:
    # sign=+1: x1 - shift, sign=-1: shift - x1
    return Polynomial.from_terms(3, [(sign, (1, 0, 0)), (-sign * shift, (0, 0, 0))])


def _cylinder_x23(center: Fraction, radius: Fraction) -> Polynomial:
    # radius^2 - x2^2 - (x3-center)^2 >= 0 inside
    return Polynomial.from_terms(3, [
        (radius * radius - center * center, (0, 0, 0)),
        (-1, (0, 2, 0)),
        (-1, (0, 0, 2)),
        (2 * center, (0, 0, 1)),
    ])


def _bite_x12(cu: Fraction, cv: Fraction, radius: Fraction) -> Polynomial:
    # (x1-cu)^2 + (x2-cv)^2 - radius^2 >= 0 outside
    return Polynomial.from_terms(3, [
        (1, (2, 0, 0)), (-2 * cu, (1, 0, 0)),
        (1, (0, 2, 0)), (-2 * cv, (0, 1, 0)),
        (cu * cu + cv * cv - radius * radius, (0, 0, 0)),
    ])


def _strip_family(params: ScenarioParams, cylinder_center: Fraction,
                  cylinder_radius: Fraction, bite_cv: Fraction,
                  bite_radius: Fraction) -> ArrangementSpec:
    a, b, s1, s2 = params.a, params.b, params.s1, params.s2
    polys = [_plane_x1(s1, +1), _plane_x1(s2, -1),
             _cylinder_x23(cylinder_center, cylinder_radius)]
    for pj in params.p:
        polys.append(_bite_x12(pj, bite_cv, bite_radius))
    color_of = {j: (2 if j == 3 else 1) for j in range(1, params.l + 1)}
    colors = ColorMap(params.l, 2, color_of, {1: 0, 2: 0})
    meta = {
        "name": params.name, "l": params.l,
        "a": params.a, "b": params.b, "s1": s1, "s2": s2, "p": params.p,
        "midline": (2, 0),
    }
    return ArrangementSpec(3, tuple(polys), colors, meta)


def _corner_points_strip(params: ScenarioParams, cyl_center: Fraction,
                         cyl_radius: Fraction, bite_cv: Fraction,
                         bite_radius: Fraction):
    """Exact points on every pairwise boundary stratum of the strip family.

    Bites tangent to the midline (bite_cv == cyl_radius) meet the cylinder at
    (p +- r, R, center) and (p, 0, center +- R); midline-centered bites
    (bite_cv == 0, the printed variant) meet it at (p, +-r, center) and
    (p +- r, 0, center +- R).
    """
    s1, s2 = params.s1, params.s2
    pts = []
    for x1, plane in ((s1, 1), (s2, 2)):
        for x2 in (-cyl_radius, cyl_radius):
            pts.append(((x1, x2, cyl_center), frozenset({plane, 3})))
        for x3 in (cyl_center - cyl_radius, cyl_center + cyl_radius):
            pts.append(((x1, Fraction(0), x3), frozenset({plane, 3})))
    for idx, pj in enumerate(params.p, start=4):
        if bite_cv == cyl_radius:
            for x1 in (pj - bite_radius, pj + bite_radius):
                pts.append(((x1, cyl_radius, cyl_center), frozenset({idx, 3})))
            for x3 in (cyl_center - cyl_radius, cyl_center + cyl_radius):
                pts.append(((pj, Fraction(0), x3), frozenset({idx, 3})))
        elif bite_cv == 0 and bite_radius == cyl_radius:
            for x2 in (-bite_radius, bite_radius):
                pts.append(((pj, x2, cyl_center), frozenset({idx, 3})))
            for x1 in (pj - bite_radius, pj + bite_radius):
                for x3 in (cyl_center - cyl_radius, cyl_center + cyl_radius):
                    pts.append(((x1, Fraction(0), x3), frozenset({idx, 3})))
    return tuple(pts)


def _reeb_profile_strip(l: int) -> dict:
    k = l - 3
    return {
        "num_vertices": 2 + 2 * k,
        "num_edges": 3 * k + 2,
        "betti1": l - 2,
        "extremal": [(2, 1)] * 2,            # (degree, cluster count)
        "non_extremal": [(3, 1)] * (2 * k),
    }


def _make_thm2(params: ScenarioParams) -> Scenario:
    a, b = params.a, params.b
    r = b - a
    spec = _strip_family(params, a, r, r, r)
    corners = _corner_points_strip(params, a, r, r, r)
    margin = float(r) / 2
    box = ((float(params.s1) - margin, float(params.s2) + margin),
           (-float(r) - margin, float(r) + margin),
           (float(2 * a - b) - margin, float(b) + margin))
    expected = ExpectedResults(
        values={
            "genus": params.l - 2,
            "orientable": True,
            "connected": True,
            "chi": 2 - 2 * (params.l - 2),
            "reeb": _reeb_profile_strip(params.l),
            "singular_values": [float(2 * a - b), float(b)],
            "singular_values_clipped": [float(b)],
            "image_clipped": [float(a), float(b)],
        },
        provenance={
            "genus": "paper", "orientable": "paper", "connected": "paper",
            "chi": "derived", "reeb": "paper",
            "singular_values": "derived",
            "singular_values_clipped": "paper",
            "image_clipped": "paper",
        })
    return Scenario(params, spec, expected, box, corners,
                    default_slice=(3, a), singular_axis=3,
                    singular_clip=(3, a))


def _make_thm3(params: ScenarioParams) -> Scenario:
    a, b = params.a, params.b
    r = (b - a) / 2
    center = (a + b) / 2
    spec = _strip_family(params, center, r, r, r)
    corners = _corner_points_strip(params, center, r, r, r)
    margin = float(r) / 2
    box = ((float(params.s1) - margin, float(params.s2) + margin),
           (-float(r) - margin, float(r) + margin),
           (float(a) - margin, float(b) + margin))
    expected = ExpectedResults(
        values={
            "genus": params.l - 2,
            "orientable": True,
            "connected": True,
            "chi": 2 - 2 * (params.l - 2),
            "reeb": _reeb_profile_strip(params.l),
            "singular_values": [float(a), float(b)],
            "image": [float(a), float(b)],
        },
        provenance={
            "genus": "derived", "orientable": "paper", "connected": "paper",
            "chi": "derived", "reeb": "derived",
            "singular_values": "paper", "image": "paper",
        })
    return Scenario(params, spec, expected, box, corners,
                    default_slice=(3, center), singular_axis=3,
                    singular_clip=None)


def paper_literal_thm2(params: ScenarioParams) -> Scenario:
    """The strip family with bites centered on the midline at full radius,
    exactly as printed; kept as a negative fixture for the validator."""
    params = params.resolved()
    params.check()
    a, b = params.a, params.b
    r = b - a
    spec = _strip_family(params, a, r, Fraction(0), r)
    corners = _corner_points_strip(params, a, r, Fraction(0), r)
    margin = float(r) / 2
    box = ((float(params.s1) - margin, float(params.s2) + margin),
           (-float(r) - margin, float(r) + margin),
           (float(2 * a - b) - margin, float(b) + margin))
    expected = ExpectedResults(
        values={"validator_cond3a": False,
                "tangency_witnesses": [[float(pj), float(sgn * r), float(a)]
                                       for pj in params.p for sgn in (-1, 1)]},
        provenance={"validator_cond3a": "derived", "tangency_witnesses": "derived"})
    return Scenario(params, spec, expected, box, corners,
                    default_slice=(3, a), singular_axis=3, singular_clip=None)


def _cut_line(p0, p1, interior) -> Polynomial:
    """Plane through two slice points (x3-invariant), positive at interior."""
    (x0, y0), (x1, y1) = p0, p1
    aa = y1 - y0
    bb = x0 - x1
    cc = -(aa * x0 + bb * y0)
    val = aa * interior[0] + bb * interior[1] + cc
    if val < 0:
        aa, bb, cc = -aa, -bb, -cc
    return Polynomial.from_terms(3, [(aa, (1, 0, 0)), (bb, (0, 1, 0)), (cc, (0, 0, 0))])


def _cut_circle(p0, p1) -> Polynomial:
    """Cylinder over a circle through two slice points, centered on their
    perpendicular bisector on the left of the chord, far enough out that the
    center clears both coordinates of the chord box; region outside."""
    mx = (p0[0] + p1[0]) / 2
    my = (p0[1] + p1[1]) / 2
    dx = p1[0] - p0[0]
    dy = p1[1] - p0[1]
    n = (-dy, dx)
    t = Fraction(3, 2) * max(abs(dx) / (2 * abs(dy)), abs(dy) / (2 * abs(dx)),
                             Fraction(1))
    cx = mx + t * n[0]
    cy = my + t * n[1]
    r2 = (p0[0] - cx) ** 2 + (p0[1] - cy) ** 2
    return Polynomial.from_terms(3, [
        (1, (2, 0, 0)), (-2 * cx, (1, 0, 0)),
        (1, (0, 2, 0)), (-2 * cy, (0, 1, 0)),
        (cx * cx + cy * cy - r2, (0, 0, 0)),
    ])


def _make_case(params: ScenarioParams, case: str) -> Scenario:
    a, b = params.a, params.b
    r = b - a
    s1, s2 = params.s1, params.s2
    mid = (s1 + s2) / 2
    l1 = {"A": 3, "B": 4, "C": 5}[case]
    polys = [_plane_x1(s1, +1), _plane_x1(s2, -1), _cylinder_x23(a, r)]
    corner_pts = []
    for x1, plane in ((s1, 1), (s2, 2)):
        for x3 in (2 * a - b, b):
            corner_pts.append(((x1, Fraction(0), x3), frozenset({plane, 3})))
    if case == "A":
        for x1, plane in ((s1, 1), (s2, 2)):
            for x2 in (-r, r):
                corner_pts.append(((x1, x2, a), frozenset({plane, 3})))
    if case in ("B", "C"):
        if params.variant == "line":
            polys.append(_cut_line((s1, Fraction(0)), (mid, r), (mid, Fraction(0))))
        else:
            polys.append(_cut_circle((s1, Fraction(0)), (mid, r)))
        corner_pts.append(((s1, Fraction(0), a), frozenset({1, 4})))
        corner_pts.append(((mid, r, a), frozenset({3, 4})))
        corner_pts.append(((s1, -r, a), frozenset({1, 3})))
        for x2 in (-r, r):
            corner_pts.append(((s2, x2, a), frozenset({2, 3})))
    if case == "C":
        if params.variant == "line":
            polys.append(_cut_line((s2, Fraction(0)), (mid, -r), (mid, Fraction(0))))
        else:
            polys.append(_cut_circle((s2, Fraction(0)), (mid, -r)))
        corner_pts = [cp for cp in corner_pts if not (cp[0][0] == s2 and cp[0][1] == -r)]
        corner_pts.append(((s2, Fraction(0), a), frozenset({2, 5})))
        corner_pts.append(((mid, -r, a), frozenset({3, 5})))
    color_of = {1: 1, 2: 1, 3: 2, 4: 3, 5: 3}
    colors = ColorMap(l1, 2 if l1 == 3 else 3,
                      {j: color_of[j] for j in range(1, l1 + 1)},
                      {i: 0 for i in range(1, (2 if l1 == 3 else 3) + 1)})
    meta = {"name": params.name, "a": a, "b": b, "s1": s1, "s2": s2,
            "variant": params.variant, "midline": (2, 0)}
    spec = ArrangementSpec(3, tuple(polys), colors, meta)
    margin = float(r) / 2
    box = ((float(s1) - margin - (2 if params.variant == "circle" else 0),
            float(s2) + margin + (2 if params.variant == "circle" else 0)),
           (-float(r) - margin, float(r) + margin),
           (float(2 * a - b) - margin, float(b) + margin))
    genus = {"A": 1, "B": 2, "C": 3}[case]
    reeb = {
        "A": {"num_vertices": 2, "num_edges": 2, "betti1": 1,
              "extremal": [(2, 1)] * 2, "non_extremal": []},
        "B": {"num_vertices": 5, "num_edges": 6, "betti1": 2,
              "extremal": [(2, 1)] * 3, "non_extremal": [(3, 1)] * 2},
        "C": {"num_vertices": 4, "num_edges": 4, "betti1": 1,
              "extremal": [(2, 1)] * 2, "non_extremal": [(2, 2)] * 2},
    }[case]
    expected = ExpectedResults(
        values={"genus": genus, "orientable": True, "connected": True,
                "chi": 2 - 2 * genus, "reeb": reeb,
                "singular_values": [float(2 * a - b), float(b)]},
        provenance={"genus": "paper", "orientable": "paper", "connected": "paper",
                    "chi": "derived", "reeb": "paper",
                    "singular_values": "derived"})
    return Scenario(params, spec, expected, box, tuple(corner_pts),
                    default_slice=(3, a), singular_axis=3, singular_clip=None)


def _make_problem3_n4(params: ScenarioParams) -> Scenario:
    a, b, s1, s2 = params.a, params.b, params.s1, params.s2
    mid = (s1 + s2) / 2
    r1 = (s2 - s1) / 2
    f1 = Polynomial.from_terms(4, [
        (r1 * r1 - mid * mid, (0, 0, 0, 0)),
        (-1, (2, 0, 0, 0)), (2 * mid, (1, 0, 0, 0)),
        (-1, (0, 0, 2, 0)),
    ])
    f2 = Polynomial.from_terms(4, [
        ((b - a) ** 2 - a * a, (0, 0, 0, 0)),
        (-1, (0, 2, 0, 0)),
        (-1, (0, 0, 0, 2)), (2 * a, (0, 0, 0, 1)),
    ])
    colors = ColorMap(2, 2, {1: 1, 2: 2}, {1: 0, 2: 0})
    meta = {"name": params.name, "a": a, "b": b, "s1": s1, "s2": s2,
            "projection_axes": (3, 4)}
    spec = ArrangementSpec(4, (f1, f2), colors, meta)
    rb = float(b - a)
    box = ((float(s1) - 0.5, float(s2) + 0.5), (-rb - 0.5, rb + 0.5),
           (-float(r1) - 0.5, float(r1) + 0.5),
           (float(2 * a - b) - 0.5, float(b) + 0.5))
    corners = (((mid + r1, b - a, Fraction(0), a), frozenset({1, 2})),
               ((mid - r1, -(b - a), Fraction(0), a), frozenset({1, 2})))
    expected = ExpectedResults(
        values={"interior_fiber": {"chi": 0, "genus": 1, "orientable": True,
                                   "connected": True},
                "boundary_fiber": "circle", "corner_fiber": "point"},
        provenance={"interior_fiber": "derived", "boundary_fiber": "derived",
                    "corner_fiber": "derived"})
    return Scenario(params, spec, expected, box, corners,
                    default_slice=None, singular_axis=None, singular_clip=None)


def _make_disk(params: ScenarioParams) -> Scenario:
    f1 = Polynomial.from_terms(2, [(1, (0, 0)), (-1, (2, 0)), (-1, (0, 2))])
    colors = ColorMap(1, 1, {1: 1}, {1: 0})
    spec = ArrangementSpec(2, (f1,), colors, {"name": "disk"})
    expected = ExpectedResults(
        values={"genus": 0, "chi": 2, "orientable": True, "connected": True},
        provenance={"genus": "derived", "chi": "derived",
                    "orientable": "derived", "connected": "derived"})
    corners = ()
    box = ((-1.25, 1.25), (-1.25, 1.25))
    return Scenario(params, spec, expected, box, corners,
                    default_slice=None, singular_axis=1, singular_clip=None)


def _make_sphere(params: ScenarioParams) -> Scenario:
    f1 = Polynomial.from_terms(1, [(1, (0,)), (-1, (2,))])
    colors = ColorMap(1, 1, {1: 1}, {1: 1})
    spec = ArrangementSpec(1, (f1,), colors, {"name": "sphere"})
    expected = ExpectedResults(
        values={"ambient_dim": 3, "manifold_dim": 2},
        provenance={"ambient_dim": "derived", "manifold_dim": "derived"})
    corners = ()
    box = ((-1.25, 1.25),)
    return Scenario(params, spec, expected, box, corners,
                    default_slice=None, singular_axis=1, singular_clip=None)


_BUILDERS = {
    "thm2": _make_thm2,
    "thm3": _make_thm3,
    "caseA": lambda p: _make_case(p, "A"),
    "caseB": lambda p: _make_case(p, "B"),
    "caseC": lambda p: _make_case(p, "C"),
    "problem3_n4": _make_problem3_n4,
    "disk": _make_disk,
    "sphere": _make_sphere,
    "thm2-literal": paper_literal_thm2,
}

PRESET_NAMES = tuple(sorted(_BUILDERS))


def make_scenario(params: ScenarioParams) -> Scenario:
    """Build the preset named in ``params``, validating its inequalities."""
    name = params.name.replace("-n4", "_n4")
    if name not in _BUILDERS:
        raise ScenarioError(f"unknown preset {params.name!r}; "
                            f"choose from {', '.join(PRESET_NAMES)}")
    params = replace(params, name=name)
    if name == "thm2-literal":
        return _BUILDERS[name](params)
    resolved = params.resolved()
    resolved.check()
    return _BUILDERS[name](resolved)


def scenario_by_name(name: str, **overrides) -> Scenario:
    return make_scenario(ScenarioParams(name=name, **overrides))


def fiber_survey(spec: ArrangementSpec, grid, density: float = 0.1,
                 tol: float = 1e-9) -> list[dict]:
    """Survey preimages of the two-coordinate projection of the n=4 preset.

    ``grid`` holds (c3, c4) targets, optionally tagged with a probe label.
    Interior targets run the full slice/double pipeline and report surface
    invariants; targets where one interval collapses report a circle, both a
    point, and targets outside the image are marked, not raised.
    """
    from .doubler import build_double, surface_invariants
    from .meshing import triangulate
    from .slicer import planar_region

    meta = spec.param_meta or {}
    if spec.n != 4:
        raise ScenarioError("fiber survey requires the 4-dimensional preset")
    records = []
    for entry in grid:
        if len(entry) == 3:
            c3, c4, probe = entry
        else:
            (c3, c4), probe = entry, ""
        c3 = Fraction(float(c3))
        c4 = Fraction(float(c4))
        # interval half-width discriminants of the two constraints
        q1 = spec.poly(1).restrict({1: Fraction(0), 2: c3, 3: c4})
        q2 = spec.poly(2).restrict({0: Fraction(0), 2: c3, 3: c4})
        d1 = _interval_discriminant(q1)
        d2 = _interval_discriminant(q2)
        rec = {"point": [float(c3), float(c4)], "probe": probe,
               "interval_collapsed": [bool(abs(float(d1)) <= tol or d1 < 0),
                                      bool(abs(float(d2)) <= tol or d2 < 0)]}
        if d1 < -tol or d2 < -tol:
            rec["kind"] = "outside"
        elif abs(float(d1)) <= tol and abs(float(d2)) <= tol:
            rec["kind"] = "point"
        elif abs(float(d1)) <= tol or abs(float(d2)) <= tol:
            rec["kind"] = "circle"
        else:
            region = planar_region(spec, {2: c3, 3: c4})
            mesh = triangulate(region, density)
            surf = build_double(mesh, spec.colors.l2)
            inv = surface_invariants(surf)
            rec["kind"] = "surface"
            rec["invariants"] = inv.as_dict()
        records.append(rec)
    return records


def _interval_discriminant(q: Polynomial) -> Fraction:
    """For a one-variable quadratic c0 + c1 t + c2 t^2 with c2 < 0, the
    value at the vertex (positive iff the positivity interval is a real
    interval with interior)."""
    d = q.as_dict()
    c2 = d.get((2,), Fraction(0))
    c1 = d.get((1,), Fraction(0))
    c0 = d.get((0,), Fraction(0))
    if c2 >= 0:
        raise ScenarioError("expected a downward quadratic for the fiber interval")
    return c0 - c1 * c1 / (4 * c2)


# ---------------------------------------------------------------------------
# synthetic labeled regions for the randomized oracle-equivalence suite


def _segment_arc(p0, p1, source, color) -> Arc:
    # region normal = left of the p0 -> p1 travel direction
    a = Fraction(p0[1] - p1[1])
    b = Fraction(p1[0] - p0[0])
    c = -(a * p0[0] + b * p0[1])
    curve = LineCurve(a, b, c, source, color)
    return Arc("segment", source, color, p0, p1, curve)


def random_labeled_region(seed: int) -> tuple[PlanarRegion, int]:
    """A random rectangle with disjoint half-disk bites and circular holes,
    with a random valid color labeling; returns (region, number of colors).

    Corners never see a repeated color, every feature keeps at least a
    2.5-density clearance (density 0.1 scale), and some regions deliberately
    omit colors from the boundary so the doubled surface disconnects.
    """
    rng = random.Random(seed)
    w = Fraction(rng.randint(30, 60), 10)
    h = Fraction(rng.randint(25, 40), 10)
    l2 = rng.choice([2, 2, 3, 3, 4])
    ec, oc = rng.sample(range(1, l2 + 1), 2)  # edge colors, adjacent-distinct
    n_bites = rng.randint(0, 2)
    n_holes = rng.randint(0, 2)
    corners_rect = [(Fraction(0), Fraction(0)), (w, Fraction(0)), (w, h), (Fraction(0), h)]
    # bites sit on the bottom edge, well separated
    bite_data = []
    cursor = Fraction(6, 10)
    for _ in range(n_bites):
        r = Fraction(rng.randint(3, 5), 10)
        cx = cursor + r
        if cx + r > w - Fraction(6, 10):
            break
        color = rng.choice([c for c in range(1, l2 + 1) if c != ec])
        bite_data.append((cx, r, color))
        cursor = cx + r + Fraction(8, 10)
    hole_data = []
    for _ in range(n_holes):
        r = Fraction(rng.randint(3, 6), 10)
        cx = Fraction(rng.randint(10, int((w - 1) * 10)), 10)
        cy = Fraction(rng.randint(12, int((h - 1) * 10)), 10)
        if cy - r < Fraction(11, 10) or cy + r > h - Fraction(5, 10) \
                or cx - r < Fraction(5, 10) or cx + r > w - Fraction(5, 10):
            continue
        if any(abs(cx - ox) < r + orr + Fraction(5, 10) and abs(cy - oy) < r + orr + Fraction(5, 10)
               for ox, oy, orr, _ in hole_data):
            continue
        hole_data.append((cx, cy, r, rng.randint(1, l2)))

    source = 0
    arcs: list[Arc] = []
    # bottom edge with bites carved out
    bottom_color = ec
    xs = Fraction(0)
    source += 1
    bottom_source = source
    for cx, r, bcolor in bite_data:
        arcs.append(_segment_arc((xs, Fraction(0)), (cx - r, Fraction(0)),
                                 bottom_source, bottom_color))
        source += 1
        circ = CircleCurve(cx, Fraction(0), r * r, outside=True,
                           source=source, color=bcolor)
        # region outside: clockwise traversal over the upper half disk
        arcs.append(Arc("arc", source, bcolor, (cx - r, Fraction(0)),
                        (cx + r, Fraction(0)), circ, math.pi, 0.0))
        xs = cx + r
    arcs.append(_segment_arc((xs, Fraction(0)), (w, Fraction(0)),
                             bottom_source, bottom_color))
    source += 1
    arcs.append(_segment_arc((w, Fraction(0)), (w, h), source, oc))
    source += 1
    arcs.append(_segment_arc((w, h), (Fraction(0), h), source, ec))
    source += 1
    arcs.append(_segment_arc((Fraction(0), h), (Fraction(0), Fraction(0)), source, oc))
    loops = [arcs]
    for cx, cy, r, hcolor in hole_data:
        source += 1
        circ = CircleCurve(cx, cy, r * r, outside=True, source=source, color=hcolor)
        sample = (float(cx) + float(r), float(cy))
        loops.append([Arc("arc", source, hcolor, sample, sample, circ,
                          0.0, 2 * math.pi, closed_loop=True)])
    region = region_from_loops(loops, euler_char=1 - len(hole_data))
    return region, l2


def region_from_loops(loops: list[list[Arc]], euler_char: int) -> PlanarRegion:
    """Package hand-built arc loops as a region (synthetic inputs and tests).

    The constraints are reconstructed from the arc curves so membership tests
    and meshing work as for sliced regions.
    """
    sources = sorted({arc.source for loop in loops for arc in loop})
    constraints = []
    colors = []
    for s in sources:
        arcs_s = [a for loop in loops for a in loop if a.source == s]
        curve = arcs_s[0].curve
        colors.append(arcs_s[0].color)
        if isinstance(curve, LineCurve):
            constraints.append(Polynomial.from_terms(
                2, [(curve.a, (1, 0)), (curve.b, (0, 1)), (curve.c, (0, 0))]))
        else:
            sgn = 1 if curve.outside else -1
            constraints.append(Polynomial.from_terms(2, [
                (sgn, (2, 0)), (-2 * sgn * curve.cx, (1, 0)),
                (sgn, (0, 2)), (-2 * sgn * curve.cy, (0, 1)),
                (sgn * (curve.cx ** 2 + curve.cy ** 2 - curve.r2), (0, 0)),
            ]))
    corner_map: dict[tuple, dict] = {}
    for loop in loops:
        for arc in loop:
            if arc.closed_loop:
                continue
            for p in (arc.p0, arc.p1):
                key = (round(float(p[0]) / 1e-9), round(float(p[1]) / 1e-9))
                rec = corner_map.setdefault(key, {"point": p, "sources": set(),
                                                  "colors": set()})
                rec["sources"].add(arc.source)
                rec["colors"].add(arc.color)
    corners = [Corner(r["point"], frozenset(r["sources"]), frozenset(r["colors"]))
               for r in corner_map.values()]
    corners.sort(key=lambda c: (float(c.point[0]), float(c.point[1])))
    return PlanarRegion(
        slice_axes=(), slice_values=(), loops=loops, corners=corners,
        euler_char=euler_char, constraints=tuple(constraints),
        sources=tuple(sources), colors=tuple(colors),
        keep_axes=(0, 1), ambient_dim=2)
