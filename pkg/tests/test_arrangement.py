from fractions import Fraction

import numpy as np
import pytest

from momentforge.arrangement import (ArrangementError, ColorMap,
                                     NotInClosureError, classify_point,
                                     color_polynomial, distinct_lifts,
                                     lift_point, lifted_system)
from momentforge.polynomial import p_eval, p_eval_exact
from momentforge.scenarios import ScenarioParams, make_scenario


def thm2_spec(**kw):
    defaults = dict(name="thm2", l=4, s1=Fraction(-3), s2=Fraction(3),
                    p=(Fraction(0),))
    defaults.update(kw)
    return make_scenario(ScenarioParams(**defaults)).spec


class TestColorMap:
    def test_surjectivity_enforced(self):
        with pytest.raises(ArrangementError):
            ColorMap(2, 2, {1: 1, 2: 1}, {1: 0, 2: 0})

    def test_fibers(self):
        spec = thm2_spec()
        assert spec.colors.fiber(1) == (1, 2, 4)
        assert spec.colors.fiber(2) == (3,)


class TestColorPolynomial:
    def test_thm2_color_degrees(self):
        spec = thm2_spec()
        assert color_polynomial(spec, 1).degree == 4
        assert color_polynomial(spec, 2) == spec.poly(3)

    def test_single_surface_color_is_the_polynomial(self):
        spec = make_scenario(ScenarioParams(name="disk")).spec
        assert color_polynomial(spec, 1) == spec.poly(1)

    def test_caseC_color3_is_cut_product(self):
        spec = make_scenario(ScenarioParams(name="caseC")).spec
        from momentforge.polynomial import p_mul
        assert color_polynomial(spec, 3) == p_mul(spec.poly(4), spec.poly(5))

    def test_out_of_range(self):
        with pytest.raises(ArrangementError):
            color_polynomial(thm2_spec(), 3)

    def test_vanishes_exactly_where_a_member_vanishes(self):
        spec = thm2_spec()
        F1 = color_polynomial(spec, 1)
        on_plane = (Fraction(-3), Fraction(1, 2), Fraction(1, 3))
        assert p_eval_exact(spec.poly(1), on_plane) == 0
        assert p_eval_exact(F1, on_plane) == 0
        interior = (Fraction(1), Fraction(-1, 2), Fraction(0))
        assert p_eval_exact(F1, interior) != 0


class TestLiftedSystem:
    def test_thm2_dimensions(self):
        ls = lifted_system(thm2_spec())
        assert ls.ambient_dim == 5
        assert ls.manifold_dim == 3

    def test_case_dimensions(self):
        for name in ("caseB", "caseC"):
            ls = lifted_system(make_scenario(ScenarioParams(name=name)).spec)
            assert ls.ambient_dim == 6
            assert ls.manifold_dim == 3

    def test_sphere_preset_is_unit_sphere(self):
        sc = make_scenario(ScenarioParams(name="sphere"))
        ls = lifted_system(sc.spec)
        assert ls.ambient_dim == 3
        assert ls.manifold_dim == 2
        eq = ls.equations[0]
        # 1 - x^2 - y1^2 - y2^2 vanishes on the unit sphere
        assert p_eval(eq, (0.6, 0.8, 0.0)) == pytest.approx(0.0, abs=1e-15)
        assert p_eval(eq, (1.0, 0.0, 0.0)) == 0.0

    def test_dimension_gap_is_color_count(self):
        for name in ("thm2", "caseB", "caseC", "problem3_n4", "sphere"):
            spec = make_scenario(ScenarioParams(name=name)).spec
            ls = lifted_system(spec)
            assert ls.ambient_dim - ls.manifold_dim == spec.colors.l2


class TestClassifyPoint:
    def test_interior_example(self):
        spec = thm2_spec()
        kind, active = classify_point(spec, (0.0, -0.5, 0.0))
        assert kind == "interior"
        vals = [p_eval(spec.poly(j), (0.0, -0.5, 0.0)) for j in range(1, 5)]
        assert vals == [3.0, 3.0, 0.75, 1.25]

    def test_left_plane_boundary(self):
        kind, active = classify_point(thm2_spec(), (-3.0, 0.0, 0.0))
        assert kind == "boundary"
        assert set(active) == {1}

    def test_bite_tangency_point(self):
        spec = thm2_spec()
        assert p_eval_exact(spec.poly(4), (Fraction(0), Fraction(0), Fraction(0))) == 0
        kind, active = classify_point(spec, (0.0, 0.0, 0.0))
        assert kind == "boundary"
        assert set(active) == {4}

    def test_outside(self):
        kind, active = classify_point(thm2_spec(), (-4.0, 0.0, 0.0))
        assert kind == "outside"


class TestLiftPoint:
    def test_interior_has_four_distinct_lifts(self):
        ls = lifted_system(thm2_spec())
        lifts = distinct_lifts(ls, (0.0, -0.5, 0.0))
        assert len(lifts) == 4

    def test_boundary_lifts_coincide_pairwise(self):
        ls = lifted_system(thm2_spec())
        lifts = distinct_lifts(ls, (-3.0, 0.0, 0.0))
        assert len(lifts) == 2

    def test_outside_raises(self):
        ls = lifted_system(thm2_spec())
        with pytest.raises(NotInClosureError):
            lift_point(ls, (-4.0, 0.0, 0.0), (1, 1))

    def test_equation_residuals_below_1e12(self):
        spec = thm2_spec()
        ls = lifted_system(spec)
        rng = np.random.default_rng(3)
        count = 0
        while count < 25:
            x = rng.uniform((-3, -1, -1), (3, 1, 1))
            kind, _ = classify_point(spec, tuple(x))
            if kind == "outside":
                continue
            count += 1
            for mask in range(4):
                signs = (1 if mask & 1 else -1, 1 if mask & 2 else -1)
                pt = lift_point(ls, tuple(x), signs)
                for eq in ls.equations:
                    assert abs(p_eval(eq, pt)) <= 1e-12

    def test_lift_count_matches_active_colors(self):
        spec = thm2_spec()
        ls = lifted_system(spec)
        cases = [
            ((0.0, -0.5, 0.0), 0),   # interior
            ((-3.0, 0.5, 0.0), 1),   # one color active (plane)
            ((-3.0, 1.0, 0.0), 2),   # corner: plane (color 1) + cylinder (color 2)
        ]
        for x, active_colors in cases:
            lifts = distinct_lifts(ls, x)
            assert len(lifts) == 2 ** (2 - active_colors)
