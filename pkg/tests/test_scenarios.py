from fractions import Fraction

import pytest

from momentforge.polynomial import p_eval_exact
from momentforge.scenarios import (ScenarioError, ScenarioParams, fiber_survey,
                                   make_scenario, paper_literal_thm2,
                                   random_labeled_region, scenario_by_name)


class TestParams:
    def test_defaults_satisfy_inequalities(self):
        for l in (3, 4, 5, 6, 7):
            params = ScenarioParams(name="thm2", l=l).resolved()
            params.check()
            k = l - 3
            assert params.s2 - params.s1 > 2 * k * (params.b - params.a)
            for lo, hi in zip(params.p, params.p[1:]):
                assert hi - lo > 2 * (params.b - params.a)

    def test_violated_spacing_reported(self):
        params = ScenarioParams(name="thm2", l=5, p=(Fraction(0), Fraction(1)))
        with pytest.raises(ScenarioError, match="2\\(b-a\\)"):
            make_scenario(params)

    def test_bad_levels_reported(self):
        with pytest.raises(ScenarioError, match="a < b"):
            make_scenario(ScenarioParams(name="thm2", a=Fraction(2), b=Fraction(1)))

    def test_unknown_preset(self):
        with pytest.raises(ScenarioError, match="unknown preset"):
            make_scenario(ScenarioParams(name="thm9"))


class TestGeneratedSpecs:
    def test_deterministic_term_for_term(self):
        a = make_scenario(ScenarioParams(name="thm2", l=5))
        b = make_scenario(ScenarioParams(name="thm2", l=5))
        assert a.spec.polys == b.spec.polys
        assert a.corners == b.corners

    def test_exact_corners_satisfy_active_surfaces(self):
        for name, kw in (("thm2", {"l": 5}), ("thm3", {"l": 4}), ("caseB", {}),
                         ("caseC", {}), ("caseC", {"variant": "circle"}),
                         ("problem3_n4", {}), ("thm2-literal", {"l": 4})):
            sc = make_scenario(ScenarioParams(name=name, **kw))
            assert sc.corners, name
            for point, active in sc.corners:
                for j in active:
                    assert p_eval_exact(sc.spec.poly(j), point) == 0, \
                        (name, point, j)

    def test_literal_differs_only_in_bite_ordinates(self):
        resolved = make_scenario(ScenarioParams(name="thm2", l=4))
        literal = make_scenario(ScenarioParams(name="thm2-literal", l=4))
        assert resolved.spec.polys[:3] == literal.spec.polys[:3]
        rb = resolved.spec.poly(4).as_dict()
        lb = literal.spec.poly(4).as_dict()
        # same x1 structure, different x2 center
        assert rb[(2, 0, 0)] == lb[(2, 0, 0)]
        assert rb[(0, 2, 0)] == lb[(0, 2, 0)]
        assert rb.get((0, 1, 0)) != lb.get((0, 1, 0))

    def test_expected_provenance_tags(self):
        for name in ("thm2", "thm3", "caseA", "caseB", "caseC", "problem3_n4"):
            sc = make_scenario(ScenarioParams(name=name))
            for key in sc.expected.values:
                assert sc.expected.provenance[key] in ("paper", "derived")

    def test_paper_literal_builder_direct(self):
        sc = paper_literal_thm2(ScenarioParams(name="thm2-literal", l=5))
        assert sc.spec.colors.l1 == 5
        assert sc.expected.get("validator_cond3a") is False


class TestFiberSurvey:
    def test_grid_kinds(self):
        sc = scenario_by_name("problem3_n4")
        r1 = (sc.params.s2 - sc.params.s1) / 2
        rb = sc.params.b - sc.params.a
        a = sc.params.a
        grid = [
            (Fraction(0), a, "interior"),
            (r1, a, "edge"),
            (Fraction(0), a + rb, "edge"),
            (r1, a + rb, "corner"),
            (r1 + 1, a, "outside"),
        ]
        recs = fiber_survey(sc.spec, grid, density=0.2)
        kinds = [r["kind"] for r in recs]
        assert kinds == ["surface", "circle", "circle", "point", "outside"]
        assert recs[0]["invariants"]["genus"] == 1
        assert recs[0]["invariants"]["chi"] == 0

    def test_interior_grid_all_tori(self):
        sc = scenario_by_name("problem3_n4")
        r1 = (sc.params.s2 - sc.params.s1) / 2
        rb = sc.params.b - sc.params.a
        grid = [(r1 * Fraction(i, 4), sc.params.a + rb * Fraction(j, 4), "interior")
                for i in (-2, 0, 2) for j in (-2, 0, 2)]
        recs = fiber_survey(sc.spec, grid, density=0.2)
        for r in recs:
            assert r["kind"] == "surface"
            assert r["invariants"] == {"chi": 0, "orientable": True,
                                       "components": 1, "genus": 1}

    def test_dimension_drop_flags(self):
        sc = scenario_by_name("problem3_n4")
        r1 = (sc.params.s2 - sc.params.s1) / 2
        recs = fiber_survey(sc.spec, [(r1, sc.params.a, "edge")], density=0.2)
        assert recs[0]["interval_collapsed"] == [True, False]


class TestRandomRegions:
    def test_seeds_are_reproducible(self):
        r1, l1 = random_labeled_region(5)
        r2, l2 = random_labeled_region(5)
        assert l1 == l2
        assert len(r1.arcs) == len(r2.arcs)
        assert [a.color for a in r1.arcs] == [a.color for a in r2.arcs]

    def test_corner_colors_always_distinct(self):
        for seed in range(30):
            region, _ = random_labeled_region(seed)
            for c in region.corners:
                assert len(c.colors) == len(c.sources) == 2

    def test_some_regions_omit_colors(self):
        omitted = 0
        for seed in range(40):
            region, l2 = random_labeled_region(seed)
            boundary_colors = {a.color for lp in region.loops for a in lp}
            if len(boundary_colors) < l2:
                omitted += 1
        assert omitted > 0
