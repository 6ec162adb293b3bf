"""Pipeline orchestration, report emission, and the command line interface.

Reports are JSON with a fixed schema version and deterministic key order, so
identical configurations produce byte-identical files on one platform.
Meshes export as OFF, Reeb digraphs as DOT, slice pictures as figures
rendered to SVG, and the expected-versus-computed table optionally as CSV
alongside the JSON report.  Exit codes: 0 on success, 2 when --strict finds
a computed value disagreeing with a claimed one (the report is still
written), 1 on hard errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional

import numpy as np

from .arrangement import ArrangementSpec, ColorMap, lifted_system
from .doubler import DoubledSurface, build_double, chi_stratified, embed, surface_invariants
from .meshing import triangulate
from .polynomial import Polynomial
from .reeb import ReebGraph, reeb_graph, reeb_stats
from .scenarios import (Scenario, ScenarioParams, fiber_survey, make_scenario)
from .singular import singular_values
from .slicer import PlanarRegion, planar_region
from .validator import SamplingConfig, validate

SCHEMA = "momentforge-report/1"
PALETTE = {1: "#1f77b4", 2: "#d62728", 3: "#2ca02c", 4: "#9467bd",
           5: "#8c564b", 6: "#e377c2"}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# serialization helpers


def _fraction_str(v) -> str:
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def params_as_dict(params: ScenarioParams) -> dict:
    return {
        "name": params.name,
        "l": params.l,
        "a": _fraction_str(params.a),
        "b": _fraction_str(params.b),
        "s1": _fraction_str(params.s1) if params.s1 is not None else None,
        "s2": _fraction_str(params.s2) if params.s2 is not None else None,
        "p": [_fraction_str(x) for x in params.p] if params.p is not None else None,
        "variant": params.variant,
        "density": params.density,
        "seed": params.seed,
    }


def parse_inline_arrangement(data: dict) -> ArrangementSpec:
    """Arrangement from a config mapping with rational coefficient strings."""
    try:
        n = int(data["n"])
        hyper = data["hypersurfaces"]
        polys = []
        color_of = {}
        for j, h in enumerate(hyper, start=1):
            terms = [(Fraction(str(c)), tuple(int(e) for e in exps))
                     for c, exps in h["terms"]]
            polys.append(Polynomial.from_terms(n, terms))
            color_of[j] = int(h["color"])
        l2 = max(color_of.values())
        sphere = {int(k): int(v) for k, v in data.get("sphere_dims",
                                                      {str(i): 0 for i in range(1, l2 + 1)}).items()}
        colors = ColorMap(len(polys), l2, color_of, sphere)
        return ArrangementSpec(n, tuple(polys), colors,
                               data.get("param_meta"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad inline arrangement: {exc}") from exc


# ---------------------------------------------------------------------------
# emitters


def emit_off(surface: DoubledSurface, path: str):
    """ASCII OFF with ambient vertex coordinates at 17 significant digits."""
    if surface.embedded is None:
        raise ConfigError("surface must be embedded before OFF export")
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{surface.num_vertices} {surface.num_triangles} 0\n")
        for row in surface.embedded:
            fh.write(" ".join(f"{float(c):.17g}" for c in row) + "\n")
        for a, b, c in surface.triangles:
            fh.write(f"3 {a} {b} {c}\n")


def read_off(path: str):
    """Vertices and triangles back from an OFF file."""
    with open(path) as fh:
        tokens = fh.read().split()
    if tokens[0] != "OFF":
        raise ConfigError("not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    idx = 4
    verts = []
    dim = None
    # vertex rows share one dimension; infer it from the layout
    total_nums = len(tokens) - 4
    dim = (total_nums - 4 * nf) // nv
    for _ in range(nv):
        verts.append([float(tokens[idx + k]) for k in range(dim)])
        idx += dim
    tris = []
    for _ in range(nf):
        cnt = int(tokens[idx])
        tris.append([int(tokens[idx + 1 + k]) for k in range(cnt)])
        idx += 1 + cnt
    return np.array(verts), np.array(tris, dtype=int)


def emit_dot(graph: ReebGraph, path: str):
    """Directed graph, vertices labeled v{i}@{level}, edges lower->upper."""
    lines = ["digraph reeb {"]
    for i, v in enumerate(graph.vertices):
        lines.append(f'  v{i} [label="v{i}@{v.level:.6g}"];')
    for lo, hi in graph.edges:
        lines.append(f"  v{lo} -> v{hi};")
    lines.append("}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_svg(region: PlanarRegion, path: str):
    """Slice picture: arcs colored by color index, corners as dots."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 5))
    for loop in region.loops:
        for arc in loop:
            samples = max(2, int(24 * (1 if not arc.is_circle else arc.sweep())))
            pts = np.array([arc.point_fraction(s)
                            for s in np.linspace(0, 1, samples)])
            color = PALETTE.get(arc.color, "#7f7f7f")
            ax.plot(pts[:, 0], pts[:, 1], color=color, lw=1.8,
                    solid_capstyle="round")
    if region.corners:
        cx = [float(c.point[0]) for c in region.corners]
        cy = [float(c.point[1]) for c in region.corners]
        ax.plot(cx, cy, "o", color="black", ms=4, zorder=5)
    for tang in region.tangencies:
        ax.plot([tang["point"][0]], [tang["point"][1]], "x", color="gray", ms=6)
    ax.set_aspect("equal")
    axes_txt = ",".join(str(a) for a in region.slice_axes)
    vals_txt = ",".join(f"{v:g}" for v in region.slice_values)
    ax.set_title(f"slice at axis {axes_txt} = {vals_txt}" if axes_txt else "region")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def emit_json(report: dict, path: str):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")


def emit_csv(report: dict, path: str):
    """Expected-versus-computed table as delimited output."""
    rows = []
    expected = report.get("expected", {})
    matches = report.get("matches", {})
    computed = report.get("results", {})
    for key in sorted(set(expected) | set(matches)):
        exp = expected.get(key, {})
        rows.append({
            "field": key,
            "expected": json.dumps(exp.get("value")),
            "provenance": exp.get("provenance", ""),
            "computed": json.dumps(_lookup_computed(computed, key)),
            "match": matches.get(key, ""),
        })
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["field", "expected", "provenance",
                                                "computed", "match"])
        writer.writeheader()
        writer.writerows(rows)


def _lookup_computed(results: dict, key: str):
    table = {
        "genus": ("invariants", "genus"),
        "chi": ("invariants", "chi"),
        "orientable": ("invariants", "orientable"),
        "connected": ("invariants", "components"),
        "reeb": ("reeb",),
        "singular_values": ("singular", "values"),
        "singular_values_clipped": ("singular_clipped", "values"),
        "image_clipped": ("singular_clipped", "image_interval"),
        "image": ("singular", "image_interval"),
    }
    cur = results
    for part in table.get(key, (key,)):
        if not isinstance(cur, dict) or part not in cur:
            return None
        cur = cur[part]
    return cur


# ---------------------------------------------------------------------------
# pipeline


def run_pipeline(scenario: Scenario, actions: list[str],
                 *, density: Optional[float] = None,
                 samples: int = 2048, tol: float = 1e-9, seed: int = 0,
                 axis: Optional[int] = None, value: Optional[float] = None,
                 clip: Optional[float] = None,
                 mesh_path: Optional[str] = None, dot_path: Optional[str] = None,
                 svg_path: Optional[str] = None) -> dict:
    """Execute the requested actions in dependency order and build a report."""
    density = density if density is not None else scenario.params.density
    results: dict = {}
    spec = scenario.spec
    meta = dict(spec.param_meta or {})
    meta["box"] = scenario.box
    meta["corner_points"] = scenario.corners
    spec = ArrangementSpec(spec.n, spec.polys, spec.colors, meta)

    region = None
    surface = None
    graph = None

    ls0 = lifted_system(spec)
    results["lifted"] = {"ambient_dim": ls0.ambient_dim,
                         "manifold_dim": ls0.manifold_dim,
                         "colors": spec.colors.l2}

    need_region = {"slice", "double", "reeb"} & set(actions)
    need_surface = {"double", "reeb"} & set(actions)

    if "validate" in actions:
        cfg = SamplingConfig(boundary_samples=samples, box=scenario.box,
                             seed=seed, tol_zero=tol)
        report = validate(spec, cfg)
        results["validation"] = report.as_dict()

    if need_region:
        if axis is not None and value is not None:
            slc = (axis, Fraction(float(value)))
        elif scenario.default_slice is not None:
            slc = scenario.default_slice
        else:
            slc = None
        if slc is None:
            if spec.n == 2:
                region = planar_region(spec, {})
            else:
                raise ConfigError("this preset needs --axis/--value for slicing")
        else:
            region = planar_region(spec, {slc[0] - 1: slc[1]})
        results["slice"] = {
            "axes": list(region.slice_axes),
            "values": [float(v) for v in region.slice_values],
            "loops": region.loop_count,
            "arcs": len(region.arcs),
            "corners": len(region.corners),
            "euler_char": region.euler_char,
            "tangencies": region.tangencies,
        }
        if svg_path:
            emit_svg(region, svg_path)

    if need_surface:
        mesh = triangulate(region, density)
        l2 = spec.colors.l2
        surface = build_double(mesh, l2)
        ls = lifted_system(spec)
        surface = embed(surface, ls)
        inv = surface_invariants(surface)
        results["mesh"] = {
            "vertices": mesh.num_vertices,
            "triangles": mesh.num_triangles,
            "euler_char": mesh.euler_characteristic(),
        }
        results["invariants"] = inv.as_dict()
        results["chi_stratified"] = chi_stratified(region, l2)
        results["embedding_max_residual"] = surface.max_residual
        if mesh_path:
            emit_off(surface, mesh_path)

    if "reeb" in actions:
        graph = reeb_graph(surface, 1)
        results["reeb"] = reeb_stats(graph)
        if dot_path:
            emit_dot(graph, dot_path)

    if "singular" in actions:
        s_axis = scenario.singular_axis or spec.n
        report = singular_values(spec, s_axis, clip=None, box=scenario.box)
        results["singular"] = {
            "axis": s_axis,
            "values": [sv.value for sv in report.values],
            "witnesses": [list(sv.witness) for sv in report.values],
            "strata": [sv.stratum for sv in report.values],
            "image_interval": list(report.image_interval),
        }
        clip_spec = None
        if clip is not None:
            clip_spec = (s_axis, float(clip))
        elif scenario.singular_clip is not None:
            clip_spec = (scenario.singular_clip[0], float(scenario.singular_clip[1]))
        if clip_spec is not None:
            creport = singular_values(spec, s_axis, clip=clip_spec,
                                      box=scenario.box)
            results["singular_clipped"] = {
                "axis": s_axis,
                "clip": list(clip_spec),
                "values": [sv.value for sv in creport.values],
                "image_interval": list(creport.image_interval),
            }

    if "fiber-survey" in actions:
        results["fiber_survey"] = fiber_survey_report(scenario, density=density)

    return results


def fiber_survey_report(scenario: Scenario, density: float = 0.1,
                        grid_size: int = 5) -> dict:
    meta = scenario.spec.param_meta or {}
    if meta.get("name") != "problem3_n4":
        raise ConfigError("fiber-survey applies to the problem3_n4 preset")
    records = fiber_survey(scenario.spec, survey_grid(scenario, grid_size),
                           density=density)
    return {
        "grid_size": grid_size,
        "records": records,
    }


def survey_grid(scenario: Scenario, grid_size: int = 5):
    """Interior grid plus boundary and corner probes of the image rectangle."""
    meta = scenario.spec.param_meta
    a, b = Fraction(meta["a"]), Fraction(meta["b"])
    s1, s2 = Fraction(meta["s1"]), Fraction(meta["s2"])
    r1 = (s2 - s1) / 2
    rb = b - a
    pts = []
    for i in range(1, grid_size + 1):
        c3 = -r1 + 2 * r1 * Fraction(i, grid_size + 1)
        for j in range(1, grid_size + 1):
            c4 = (a - rb) + 2 * rb * Fraction(j, grid_size + 1)
            pts.append((c3, c4, "interior"))
    pts.append((r1, a, "edge"))
    pts.append((-r1, a, "edge"))
    pts.append((Fraction(0), a - rb, "edge"))
    pts.append((Fraction(0), a + rb, "edge"))
    pts.append((r1, a + rb, "corner"))
    pts.append((r1 + 1, a, "outside"))
    return pts


# ---------------------------------------------------------------------------
# expected-versus-computed comparison


def compare_expected(scenario: Scenario, results: dict) -> dict:
    matches: dict[str, bool] = {}
    exp = scenario.expected
    if "lifted" in results:
        for key in ("ambient_dim", "manifold_dim"):
            if key in exp.values:
                matches[key] = results["lifted"][key] == exp.get(key)
    inv = results.get("invariants")
    if inv:
        if "genus" in exp.values:
            matches["genus"] = inv["genus"] == exp.get("genus")
        if "chi" in exp.values:
            matches["chi"] = inv["chi"] == exp.get("chi")
        if "orientable" in exp.values:
            matches["orientable"] = inv["orientable"] == exp.get("orientable")
        if "connected" in exp.values:
            matches["connected"] = (inv["components"] == 1) == exp.get("connected")
    if "reeb" in results and "reeb" in exp.values:
        want = exp.get("reeb")
        got = results["reeb"]
        ok = (got["num_vertices"] == want["num_vertices"]
              and got["num_edges"] == want["num_edges"]
              and got["betti1"] == want["betti1"]
              and got["extremal"] == sorted(want["extremal"])
              and got["non_extremal"] == sorted(want["non_extremal"]))
        matches["reeb"] = bool(ok)
    if "singular" in results and "singular_values" in exp.values:
        got = results["singular"]["values"]
        want = exp.get("singular_values")
        matches["singular_values"] = (
            len(got) == len(want)
            and all(abs(g - w) <= 1e-9 for g, w in zip(got, sorted(want))))
    if "singular_clipped" in results and "singular_values_clipped" in exp.values:
        got = results["singular_clipped"]["values"]
        want = exp.get("singular_values_clipped")
        matches["singular_values_clipped"] = (
            len(got) == len(want)
            and all(abs(g - w) <= 1e-9 for g, w in zip(got, sorted(want))))
        if "image_clipped" in exp.values:
            img = results["singular_clipped"]["image_interval"]
            want_img = exp.get("image_clipped")
            matches["image_clipped"] = all(abs(g - w) <= 1e-9
                                           for g, w in zip(img, want_img))
    if "image" in exp.values and "singular" in results:
        img = results["singular"]["image_interval"]
        matches["image"] = all(abs(g - w) <= 1e-9
                               for g, w in zip(img, exp.get("image")))
    if "validation" in results and "validator_cond3a" in exp.values:
        matches["validator_cond3a"] = (results["validation"]["cond3a_ok"]
                                       == exp.get("validator_cond3a"))
    if "fiber_survey" in results and "interior_fiber" in exp.values:
        want = exp.get("interior_fiber")
        recs = results["fiber_survey"]["records"]
        interior = [r for r in recs if r["probe"] == "interior"]
        ok = all(r["kind"] == "surface"
                 and r["invariants"]["chi"] == want["chi"]
                 and r["invariants"]["genus"] == want["genus"]
                 for r in interior)
        edges = [r for r in recs if r["probe"] == "edge"]
        ok = ok and all(r["kind"] == "circle" for r in edges)
        corners_ = [r for r in recs if r["probe"] == "corner"]
        ok = ok and all(r["kind"] == "point" for r in corners_)
        matches["interior_fiber"] = bool(ok)
    return matches


def build_report(scenario: Scenario, actions: list[str], results: dict) -> dict:
    matches = compare_expected(scenario, results)
    expected = {key: {"value": val,
                      "provenance": scenario.expected.provenance.get(key, "derived")}
                for key, val in scenario.expected.items()}
    return {
        "schema": SCHEMA,
        "scenario": scenario.name,
        "params": params_as_dict(scenario.params),
        "actions": list(actions),
        "results": results,
        "expected": expected,
        "matches": matches,
        "all_match": all(matches.values()) if matches else True,
    }


# ---------------------------------------------------------------------------
# command line


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--l", type=int, default=None)
    parser.add_argument("--a", type=str, default=None)
    parser.add_argument("--b", type=str, default=None)
    parser.add_argument("--variant", choices=("line", "circle"), default="line")
    parser.add_argument("--density", type=float, default=None)
    parser.add_argument("--samples", type=int, default=2048)
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--axis", type=int, default=None)
    parser.add_argument("--value", type=float, default=None)
    parser.add_argument("--clip", type=float, default=None)
    parser.add_argument("--out", type=str, default=None)
    parser.add_argument("--csv", type=str, default=None)
    parser.add_argument("--mesh", type=str, default=None)
    parser.add_argument("--dot", type=str, default=None)
    parser.add_argument("--svg", type=str, default=None)
    parser.add_argument("--strict", action="store_true")
    parser.add_argument("--config", type=str, default=None)


def _scenario_from_args(args) -> Scenario:
    overrides: dict = {"variant": args.variant, "seed": args.seed}
    if args.l is not None:
        overrides["l"] = args.l
    if args.a is not None:
        overrides["a"] = Fraction(args.a)
    if args.b is not None:
        overrides["b"] = Fraction(args.b)
    if args.density is not None:
        overrides["density"] = args.density
    params = ScenarioParams(name=args.name, **overrides)
    return make_scenario(params)


ACTIONS_BY_VERB = {
    "run": ["validate", "slice", "double", "reeb", "singular"],
    "validate": ["validate"],
    "slice": ["slice"],
    "double": ["slice", "double"],
    "reeb": ["slice", "double", "reeb"],
    "singular": ["singular"],
    "fiber-survey": ["fiber-survey"],
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="momentforge",
        description="arrangement validation, slicing, doubling and topology reports")
    sub = parser.add_subparsers(dest="verb", required=True)

    scen = sub.add_parser("scenario", help="preset pipelines")
    scen_sub = scen.add_subparsers(dest="scenario_verb", required=True)
    run_p = scen_sub.add_parser("run", help="full pipeline on a preset")
    run_p.add_argument("name")
    _add_common(run_p)

    for verb in ("validate", "slice", "double", "reeb", "singular", "fiber-survey"):
        p = sub.add_parser(verb)
        p.add_argument("name", nargs="?", default=None)
        _add_common(p)

    args = parser.parse_args(argv)
    verb = args.verb if args.verb != "scenario" else "run"

    try:
        if getattr(args, "config", None):
            with open(args.config) as fh:
                conf = json.load(fh)
            if "preset" in conf:
                params = ScenarioParams(
                    name=conf["preset"],
                    **{k: (Fraction(str(v)) if k in ("a", "b", "s1", "s2")
                           else v)
                       for k, v in conf.items()
                       if k in ("l", "a", "b", "s1", "s2", "variant",
                                "density", "seed")})
                scenario = make_scenario(params)
            else:
                spec = parse_inline_arrangement(conf)
                scenario = _wrap_inline(spec, conf)
            actions = conf.get("actions", ACTIONS_BY_VERB[verb])
        else:
            if not getattr(args, "name", None):
                print("error: preset name or --config required", file=sys.stderr)
                return 1
            scenario = _scenario_from_args(args)
            actions = ACTIONS_BY_VERB[verb]
        if scenario.name == "problem3_n4" and verb == "run":
            actions = ["validate", "fiber-survey"]
        if scenario.name in ("disk", "sphere") and verb == "run":
            actions = ["validate"] + (["slice", "double", "reeb"]
                                      if scenario.name == "disk" else [])
        if not actions:
            raise ConfigError("at least one action is required")
        paths = [p for p in (args.out, args.csv, args.mesh, args.dot, args.svg)
                 if p]
        if len(paths) != len(set(paths)):
            raise ConfigError("output paths must be distinct")

        results = run_pipeline(
            scenario, actions,
            density=args.density, samples=args.samples, tol=args.tol,
            seed=args.seed, axis=args.axis, value=args.value, clip=args.clip,
            mesh_path=args.mesh, dot_path=args.dot, svg_path=args.svg)
        report = build_report(scenario, actions, results)
        if args.out:
            emit_json(report, args.out)
        if args.csv:
            emit_csv(report, args.csv)
        for key, ok in sorted(report["matches"].items()):
            print(f"{key}: {'match' if ok else 'MISMATCH'}")
        if not args.out:
            print(json.dumps(report, indent=2))
        if args.strict:
            validation = report["results"].get("validation")
            hypotheses_fail = bool(validation) and not validation["all_ok"]
            if not report["all_match"] or hypotheses_fail:
                return 2
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - surface every failure as exit 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def _wrap_inline(spec: ArrangementSpec, conf: dict) -> Scenario:
    from .scenarios import ExpectedResults
    box = conf.get("box")
    if box is None:
        box = tuple((-10.0, 10.0) for _ in range(spec.n))
    params = ScenarioParams(name=conf.get("name", "inline"))
    return Scenario(params, spec, ExpectedResults({}, {}), tuple(map(tuple, box)),
                    (), default_slice=tuple(conf["slice"]) if "slice" in conf else None,
                    singular_axis=conf.get("singular_axis"))


if __name__ == "__main__":
    sys.exit(main())
