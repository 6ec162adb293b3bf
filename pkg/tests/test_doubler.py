import numpy as np
import pytest

from momentforge.arrangement import lifted_system
from momentforge.doubler import (DoublingError, build_double, chi_stratified,
                                 surface_invariants)
from momentforge.meshing import triangulate
from momentforge.scenarios import (ScenarioParams, make_scenario,
                                   random_labeled_region)
from momentforge.slicer import region_of_plane, slice_region

from conftest import run_scenario_pipeline


class TestBuildDouble:
    def test_disk_doubles_to_sphere(self):
        sc = make_scenario(ScenarioParams(name="disk"))
        region = region_of_plane(sc.spec)
        mesh = triangulate(region, 0.25)
        surf = build_double(mesh, 1)
        inv = surface_invariants(surf)
        assert (inv.chi, inv.genus, inv.orientable, inv.components) == (2, 0, True, 1)

    def test_caseA_doubles_to_torus(self, case_pipelines):
        inv = case_pipelines["caseA"].invariants
        assert (inv.chi, inv.genus) == (0, 1)

    def test_thm2_l4_genus_two(self, thm2_l4):
        inv = thm2_l4.invariants
        assert (inv.chi, inv.genus, inv.orientable, inv.components) == (-2, 2, True, 1)

    def test_vertex_copy_multiplicity(self, thm2_l4):
        surf = thm2_l4.surface
        mesh = thm2_l4.mesh
        from collections import Counter
        mult = Counter(int(v) for v in surf.base_vertex)
        for v in range(mesh.num_vertices):
            assert mult[v] == 2 ** (surf.l2 - len(mesh.active[v]))

    def test_every_edge_in_two_triangles(self, thm2_l4):
        counts = thm2_l4.surface.edge_counts()
        assert set(counts.values()) == {2}

    def test_bad_color_labels_rejected(self, thm2_l4):
        with pytest.raises(DoublingError):
            build_double(thm2_l4.mesh, 1)


class TestChiStratified:
    def test_thm2_bite_count_formula(self):
        for l in (4, 5, 6):
            k = l - 3
            sc = make_scenario(ScenarioParams(name="thm2", l=l))
            region = slice_region(sc.spec, 3, 0)
            assert chi_stratified(region, 2) == -2 * k
            # 2^2*1 + 2^1*(-(2k+4)) + (2k+4) spelled out
            assert 4 - 2 * (2 * k + 4) + (2 * k + 4) == -2 * k

    def test_caseB_pentagon(self):
        sc = make_scenario(ScenarioParams(name="caseB"))
        region = slice_region(sc.spec, 3, 0)
        assert len(region.arcs) == 5
        assert chi_stratified(region, 3) == 8 - 20 + 10 == -2

    def test_caseC_hexagon(self):
        sc = make_scenario(ScenarioParams(name="caseC"))
        region = slice_region(sc.spec, 3, 0)
        assert chi_stratified(region, 3) == 8 - 24 + 12 == -4

    def test_matches_mesh_on_presets(self, case_pipelines, thm2_l4):
        for pr in list(case_pipelines.values()) + [thm2_l4]:
            l2 = pr.scenario.spec.colors.l2
            assert pr.invariants.chi == chi_stratified(pr.region, l2)

    def test_density_independence(self):
        sc = make_scenario(ScenarioParams(name="thm2", l=4))
        region = slice_region(sc.spec, 3, 0)
        for density in (0.3, 0.15):
            mesh = triangulate(region, density)
            inv = surface_invariants(build_double(mesh, 2))
            assert inv.chi == chi_stratified(region, 2)


class TestSurfaceInvariants:
    def test_thm2_l5(self):
        pr = run_scenario_pipeline("thm2", l=5)
        inv = pr.invariants
        assert (inv.chi, inv.orientable, inv.components, inv.genus) == (-4, True, 1, 3)

    def test_disconnected_surface_has_no_genus(self):
        # all-boundary colors {1,2} with an unused third color: two copies
        region, _ = random_labeled_region(3)
        mesh = triangulate(region, 0.15)
        boundary_colors = {a.color for lp in region.loops for a in lp}
        l2 = max(boundary_colors) + 1
        surf = build_double(mesh, l2)
        inv = surface_invariants(surf)
        assert inv.components == 2 ** (l2 - len(boundary_colors))
        if inv.components > 1:
            assert inv.genus is None

    def test_connectivity_sign_group_criterion(self):
        for seed in range(18):
            region, l2 = random_labeled_region(seed)
            mesh = triangulate(region, 0.15)
            surf = build_double(mesh, l2)
            inv = surface_invariants(surf)
            boundary_colors = {a.color for lp in region.loops for a in lp}
            assert inv.components == 2 ** (l2 - len(boundary_colors))


class TestEmbed:
    def test_presets_have_tiny_residual(self, thm2_l4, case_pipelines):
        for pr in [thm2_l4] + list(case_pipelines.values()):
            assert pr.surface.max_residual <= 1e-10

    def test_projection_returns_base_points_exactly(self, thm2_l4):
        surf = thm2_l4.surface
        lifted = thm2_l4.mesh.lift_points()
        n = thm2_l4.scenario.spec.n
        emb = np.asarray(surf.embedded[:, :n], dtype=float)
        for vid in range(surf.num_vertices):
            assert (emb[vid] == lifted[int(surf.base_vertex[vid])]).all()

    def test_merged_vertices_share_y_zero(self, thm2_l4):
        surf = thm2_l4.surface
        mesh = thm2_l4.mesh
        ls = lifted_system(thm2_l4.scenario.spec)
        for vid in range(surf.num_vertices):
            base = int(surf.base_vertex[vid])
            for color in mesh.active[base]:
                y = float(surf.embedded[vid, ls.y_slice(color)][0])
                assert abs(y) <= 1e-5

    def test_vertices_on_lifted_equations(self, thm2_l4):
        from momentforge.polynomial import p_eval
        surf = thm2_l4.surface
        ls = lifted_system(thm2_l4.scenario.spec)
        pts = np.asarray(surf.embedded, dtype=float)
        rng = np.random.default_rng(0)
        for vid in rng.choice(surf.num_vertices, size=64, replace=False):
            for eq in ls.equations:
                assert abs(p_eval(eq, pts[vid])) <= 1e-9


class TestOracleEquivalenceSample:
    def test_random_regions_match_oracle(self):
        for seed in range(25):
            region, l2 = random_labeled_region(seed)
            mesh = triangulate(region, 0.15)
            surf = build_double(mesh, l2)
            inv = surface_invariants(surf)
            assert inv.chi == chi_stratified(region, l2)
            assert set(surf.edge_counts().values()) == {2}
