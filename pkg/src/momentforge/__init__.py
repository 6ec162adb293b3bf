"""Colored hypersurface arrangements, their lifted algebraic surfaces, and
the slicing / doubling / Reeb-graph toolchain that checks the claimed
topology of the preimage surfaces."""

from .polynomial import Polynomial, p_eval, p_grad, p_mul
from .arrangement import (ArrangementSpec, ColorMap, LiftedSystem,
                          classify_point, color_polynomial, lift_point,
                          lifted_system)
from .slicer import Arc, PlanarRegion, planar_region, region_of_plane, slice_region
from .meshing import LabeledMesh, triangulate
from .doubler import (DoubledSurface, SurfaceInvariants, build_double,
                      chi_stratified, embed, surface_invariants)
from .reeb import ReebGraph, reeb_graph, reeb_stats
from .singular import SingularValueReport, singular_values
from .validator import SamplingConfig, ValidationReport, transversality_at, validate
from .scenarios import (ExpectedResults, Scenario, ScenarioParams,
                        make_scenario, paper_literal_thm2, scenario_by_name)

__version__ = "0.1.0"

__all__ = [
    "Polynomial", "p_eval", "p_grad", "p_mul",
    "ArrangementSpec", "ColorMap", "LiftedSystem",
    "classify_point", "color_polynomial", "lift_point", "lifted_system",
    "Arc", "PlanarRegion", "planar_region", "region_of_plane", "slice_region",
    "LabeledMesh", "triangulate",
    "DoubledSurface", "SurfaceInvariants", "build_double", "chi_stratified",
    "embed", "surface_invariants",
    "ReebGraph", "reeb_graph", "reeb_stats",
    "SingularValueReport", "singular_values",
    "SamplingConfig", "ValidationReport", "transversality_at", "validate",
    "ExpectedResults", "Scenario", "ScenarioParams", "make_scenario",
    "paper_literal_thm2", "scenario_by_name",
]
