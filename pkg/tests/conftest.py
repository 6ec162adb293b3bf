import time
from fractions import Fraction

import pytest

from momentforge.arrangement import ArrangementSpec, lifted_system
from momentforge.doubler import build_double, embed, surface_invariants
from momentforge.meshing import triangulate
from momentforge.reeb import reeb_graph
from momentforge.scenarios import ScenarioParams, make_scenario
from momentforge.slicer import planar_region


def spec_with_meta(scenario):
    """Scenario spec with the box and exact corner list attached, the way the
    pipeline hands it to the validator and singular-value search."""
    meta = dict(scenario.spec.param_meta or {})
    meta["box"] = scenario.box
    meta["corner_points"] = scenario.corners
    return ArrangementSpec(scenario.spec.n, scenario.spec.polys,
                           scenario.spec.colors, meta)


class PipelineResult:
    def __init__(self, scenario, region, mesh, surface, seconds):
        self.scenario = scenario
        self.region = region
        self.mesh = mesh
        self.surface = surface
        self.seconds = seconds
        self.invariants = surface_invariants(surface)
        self.graph = reeb_graph(surface, 1)


_CACHE: dict = {}


def run_scenario_pipeline(name, density=0.15, slice_override=None, **params):
    key = (name, density, slice_override, tuple(sorted(params.items())))
    if key in _CACHE:
        return _CACHE[key]
    t0 = time.time()
    scenario = make_scenario(ScenarioParams(name=name, **params))
    slc = slice_override or scenario.default_slice
    region = planar_region(scenario.spec, {slc[0] - 1: Fraction(slc[1])})
    mesh = triangulate(region, density)
    surface = build_double(mesh, scenario.spec.colors.l2)
    surface = embed(surface, lifted_system(scenario.spec))
    result = PipelineResult(scenario, region, mesh, surface, time.time() - t0)
    _CACHE[key] = result
    return result


@pytest.fixture(scope="session")
def thm2_l4():
    return run_scenario_pipeline("thm2", l=4)


@pytest.fixture(scope="session")
def thm2_l4_worked_example():
    """The worked example parameters: s1=-3, s2=3, one bite at the origin."""
    sc = make_scenario(ScenarioParams(name="thm2", l=4, s1=Fraction(-3),
                                      s2=Fraction(3), p=(Fraction(0),)))
    return sc


@pytest.fixture(scope="session")
def case_pipelines():
    return {name: run_scenario_pipeline(name) for name in ("caseA", "caseB", "caseC")}
