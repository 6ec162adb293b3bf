from fractions import Fraction

import pytest

from momentforge.polynomial import p_eval, p_eval_exact
from momentforge.scenarios import ScenarioParams, make_scenario
from momentforge.slicer import (EmptyRegionError, UnsupportedCurveError,
                                planar_region, region_of_plane, slice_region)


def scenario(name, **kw):
    return make_scenario(ScenarioParams(name=name, **kw))


@pytest.fixture(scope="module")
def region():
    sc = scenario("thm2", l=4, s1=Fraction(-3), s2=Fraction(3), p=(Fraction(0),))
    return slice_region(sc.spec, 3, 0)


class TestThm2Slice:
    def test_loop_and_counts(self, region):
        assert region.loop_count == 1
        assert len(region.arcs) == 6
        assert len(region.corners) == 6
        assert region.euler_char == 1

    def test_colors_alternate(self, region):
        colors = [a.color for a in region.loops[0]]
        assert all(c1 != c2 for c1, c2 in zip(colors, colors[1:] + colors[:1]))
        assert sorted(set(colors)) == [1, 2]

    def test_exact_corner_coordinates(self, region):
        pts = sorted((c.point[0], c.point[1]) for c in region.corners)
        want = sorted([(-3, -1), (-3, 1), (-1, 1), (1, 1), (3, -1), (3, 1)])
        assert [(Fraction(a), Fraction(b)) for a, b in pts] == \
            [(Fraction(a), Fraction(b)) for a, b in want]
        for c in region.corners:
            assert isinstance(c.point[0], Fraction)

    def test_corner_colors_distinct(self, region):
        for c in region.corners:
            assert len(c.colors) >= 2
            assert len(c.colors) == len(c.sources)

    def test_bite_tangency_is_metadata_not_corner(self, region):
        assert len(region.tangencies) == 1
        t = region.tangencies[0]
        assert t["point"] == (0.0, 0.0)
        assert t["source"] == 4
        corner_keys = {(float(c.point[0]), float(c.point[1]))
                       for c in region.corners}
        assert (0.0, 0.0) not in corner_keys

    def test_arc_endpoints_on_their_curves(self, region):
        for arc in region.arcs:
            q = region.constraints[arc.source - 1]
            for p in (arc.p0, arc.p1):
                if isinstance(p[0], Fraction) and isinstance(p[1], Fraction):
                    assert p_eval_exact(q, p) == 0
                else:
                    assert abs(p_eval(q, (float(p[0]), float(p[1])))) < 1e-9


class TestOtherSlices:
    def test_caseA_is_a_rectangle(self):
        region = slice_region(scenario("caseA").spec, 3, 0)
        assert region.loop_count == 1
        assert len(region.arcs) == 4
        assert len(region.corners) == 4

    def test_caseC_is_a_hexagon(self):
        region = slice_region(scenario("caseC").spec, 3, 0)
        assert len(region.arcs) == 6
        assert len(region.corners) == 6
        from collections import Counter
        assert Counter(a.color for a in region.arcs) == {1: 2, 2: 2, 3: 2}

    def test_thm2_l5_has_two_bites(self):
        region = slice_region(scenario("thm2", l=5).spec, 3, 0)
        assert len(region.arcs) == 2 * 2 + 4
        assert region.euler_char == 1

    def test_thm3_slice_at_a_is_degenerate(self):
        sc = scenario("thm3", l=4)
        with pytest.raises((EmptyRegionError, UnsupportedCurveError)):
            slice_region(sc.spec, 3, 0)

    def test_thm3_midlevel_slice(self):
        sc = scenario("thm3", l=4)
        region = slice_region(sc.spec, 3, 0.5)
        assert region.loop_count == 1
        assert len(region.arcs) == 6

    def test_irrational_level_slice(self):
        sc = scenario("thm2", l=4)
        region = slice_region(sc.spec, 3, 1 / 3)
        assert len(region.arcs) == 6
        assert region.euler_char == 1

    def test_literal_slice_splits_into_beads(self):
        for l in (4, 5, 6):
            sc = scenario("thm2-literal", l=l)
            region = slice_region(sc.spec, 3, 0)
            assert region.loop_count == l - 2

    def test_disk_region(self):
        region = region_of_plane(scenario("disk").spec)
        assert region.loop_count == 1
        assert region.arcs[0].closed_loop
        assert not region.corners

    def test_empty_region_error(self):
        sc = scenario("thm2", l=4)
        with pytest.raises(EmptyRegionError):
            slice_region(sc.spec, 3, 5)

    def test_annulus_synthetic(self):
        region, l2 = _annulus()
        assert region.loop_count == 2
        assert region.euler_char == 0

    def test_refinement_keeps_structure(self):
        sc = scenario("thm2", l=4)
        a = slice_region(sc.spec, 3, 0)
        b = slice_region(sc.spec, 3, 0)
        assert (a.loop_count, len(a.arcs), len(a.corners)) == \
            (b.loop_count, len(b.arcs), len(b.corners))


def _annulus():
    import math
    from momentforge.scenarios import region_from_loops
    from momentforge.slicer import Arc, CircleCurve
    outer = CircleCurve(Fraction(0), Fraction(0), Fraction(4), outside=False,
                        source=1, color=1)
    inner = CircleCurve(Fraction(0), Fraction(0), Fraction(1), outside=True,
                        source=2, color=1)
    loops = [
        [Arc("arc", 1, 1, (2.0, 0.0), (2.0, 0.0), outer, 0.0, 2 * math.pi,
             closed_loop=True)],
        [Arc("arc", 2, 1, (1.0, 0.0), (1.0, 0.0), inner, 0.0, 2 * math.pi,
             closed_loop=True)],
    ]
    return region_from_loops(loops, euler_char=0), 1


class TestProblem3Slices:
    def test_fiber_slice_is_a_rectangle(self):
        sc = scenario("problem3_n4")
        region = planar_region(sc.spec, {2: Fraction(1, 2), 3: Fraction(1, 2)})
        assert region.loop_count == 1
        assert len(region.arcs) == 4
        assert sorted({a.color for a in region.arcs}) == [1, 2]
