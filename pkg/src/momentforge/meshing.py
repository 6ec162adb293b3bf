"""Boundary-conforming triangulation of sliced regions.

Boundary arcs are subdivided to chords no longer than the requested density
and every subdivision point is snapped back onto its curve, so the lifted
boundary vertices satisfy their defining polynomial to roundoff.  Interior
points come from a hexagonal grid kept clear of the boundary; the clearance
makes every boundary chord a Gabriel edge of the point set, hence present in
the Delaunay triangulation, and it keeps interior points strictly inside the
curved region (not just inside the chord polygon).

Two properties of the output are verified, not assumed: every declared
boundary chord borders exactly one kept triangle, and no interior edge joins
two vertices with intersecting color sets.  The second property is what makes
the sign-vector doubling glue into a closed surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np
from scipy.spatial import Delaunay

from .polynomial import p_eval_many
from .slicer import Arc, PlanarRegion


class MeshError(ValueError):
    pass


@dataclass
class LabeledMesh:
    """Triangulation of a planar region with per-vertex active color sets.

    ``active`` is the empty set on interior vertices, the arc color on arc
    vertices and the corner color set at corners; ``active_sources`` tracks
    the hypersurface indices the same way.  ``boundary_edges`` lists
    (i, j, arc_index) chords in traversal order; ``triangles`` are all
    counterclockwise.
    """

    points: np.ndarray                      # (V, 2) float
    triangles: np.ndarray                   # (T, 3) int, CCW
    active: list[frozenset[int]]            # colors per vertex
    active_sources: list[frozenset[int]]    # hypersurface indices per vertex
    boundary_edges: list[tuple[int, int, int]]
    arcs: list[Arc]
    region: PlanarRegion
    density: float

    @property
    def num_vertices(self) -> int:
        return len(self.points)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def edge_set(self) -> set[tuple[int, int]]:
        edges = set()
        for a, b, c in self.triangles:
            edges.add((min(a, b), max(a, b)))
            edges.add((min(b, c), max(b, c)))
            edges.add((min(a, c), max(a, c)))
        return edges

    def euler_characteristic(self) -> int:
        return self.num_vertices - len(self.edge_set()) + self.num_triangles

    def lift_points(self) -> np.ndarray:
        """Vertices embedded back into the ambient space of the arrangement."""
        out = np.zeros((self.num_vertices, self.region.ambient_dim))
        for axis, value in zip(self.region.slice_axes, self.region.slice_values):
            out[:, axis - 1] = value
        out[:, self.region.keep_axes[0]] = self.points[:, 0]
        out[:, self.region.keep_axes[1]] = self.points[:, 1]
        return out


def _subdivide_arc(arc: Arc, density: float) -> list[tuple[float, float]]:
    """Interior chord points of an arc, excluding both endpoints."""
    if arc.is_circle:
        r = arc.curve.radius
        span = arc.sweep()
        # chord of angular step d is 2 r sin(d/2)
        max_step = 2 * math.asin(min(1.0, density / (2 * r)))
        n = max(3 if arc.closed_loop else 1, int(math.ceil(span / max_step)))
        return [arc.point_fraction(i / n) for i in range(1, n)] \
            if not arc.closed_loop else [arc.point_fraction(i / n) for i in range(n)]
    length = arc.length()
    n = max(1, int(math.ceil(length / density)))
    return [arc.point_fraction(i / n) for i in range(1, n)]


def _point_in_loops_mask(pts: np.ndarray, segments: np.ndarray) -> np.ndarray:
    """Even-odd containment of points against all boundary chords."""
    x, y = pts[:, 0][:, None], pts[:, 1][:, None]
    x0, y0 = segments[:, 0], segments[:, 1]
    x1, y1 = segments[:, 2], segments[:, 3]
    cond = (y0 <= y) != (y1 <= y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xin = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    crossing = cond & (x < xin)
    return crossing.sum(axis=1) % 2 == 1


def _segment_distance(pts: np.ndarray, segments: np.ndarray) -> np.ndarray:
    """Min distance from each point to any chord."""
    p0 = segments[:, :2]
    d = segments[:, 2:] - p0
    dd = (d * d).sum(axis=1)
    dd[dd == 0] = 1.0
    best = np.full(len(pts), np.inf)
    chunk = 2048
    for lo in range(0, len(pts), chunk):
        block = pts[lo:lo + chunk]
        w = block[:, None, :] - p0[None, :, :]
        t = np.clip((w * d[None, :, :]).sum(axis=2) / dd[None, :], 0.0, 1.0)
        proj = p0[None, :, :] + t[:, :, None] * d[None, :, :]
        dist = np.linalg.norm(block[:, None, :] - proj, axis=2)
        best[lo:lo + chunk] = dist.min(axis=1)
    return best


def triangulate(region: PlanarRegion, density: float) -> LabeledMesh:
    """Mesh the region at the given boundary chord density."""
    if density <= 0:
        raise MeshError("density must be positive")
    arcs = region.arcs
    if not arcs:
        raise MeshError("region has no boundary arcs")

    points: list[tuple[float, float]] = []
    active: list[frozenset[int]] = []
    active_src: list[frozenset[int]] = []
    corner_ids: dict[tuple[int, int], int] = {}
    key = lambda p: (round(float(p[0]) / 1e-9), round(float(p[1]) / 1e-9))

    corner_info = {key(c.point): c for c in region.corners}

    def corner_vertex(p) -> int:
        k = key(p)
        if k not in corner_ids:
            info = corner_info.get(k)
            points.append((float(p[0]), float(p[1])))
            active.append(info.colors if info else frozenset())
            active_src.append(info.sources if info else frozenset())
            corner_ids[k] = len(points) - 1
        return corner_ids[k]

    boundary_edges: list[tuple[int, int, int]] = []
    for arc_idx, arc in enumerate(arcs):
        inner = _subdivide_arc(arc, density)
        if arc.closed_loop:
            ids = []
            for p in inner:
                points.append(p)
                active.append(frozenset({arc.color}))
                active_src.append(frozenset({arc.source}))
                ids.append(len(points) - 1)
            for a, b in zip(ids, ids[1:] + ids[:1]):
                boundary_edges.append((a, b, arc_idx))
            continue
        v0 = corner_vertex(arc.p0)
        chain = [v0]
        for p in inner:
            points.append(p)
            active.append(frozenset({arc.color}))
            active_src.append(frozenset({arc.source}))
            chain.append(len(points) - 1)
        chain.append(corner_vertex(arc.p1))
        for a, b in zip(chain, chain[1:]):
            boundary_edges.append((a, b, arc_idx))

    pts = np.array(points)
    seg_arr = np.array([[*pts[a], *pts[b]] for a, b, _ in boundary_edges])

    # hexagonal interior grid, clear of the boundary
    g = 0.8 * density
    clearance = 0.75 * density
    xmin, ymin = pts.min(axis=0) - g
    xmax, ymax = pts.max(axis=0) + g
    rows = int(math.ceil((ymax - ymin) / (g * math.sqrt(3) / 2))) + 1
    cols = int(math.ceil((xmax - xmin) / g)) + 2
    grid = []
    for r in range(rows):
        y = ymin + (r + 0.5) * g * math.sqrt(3) / 2
        off = 0.25 * g if r % 2 else -0.25 * g
        for cidx in range(cols):
            grid.append((xmin + (cidx + 0.5) * g + off, y))
    grid = np.array(grid)
    inside = _point_in_loops_mask(grid, seg_arr)
    grid = grid[inside]
    if len(grid):
        clear = _segment_distance(grid, seg_arr) >= clearance
        grid = grid[clear]
    if len(grid):
        strict = np.ones(len(grid), dtype=bool)
        lifted = np.zeros((len(grid), 2))
        lifted[:, 0] = grid[:, 0]
        lifted[:, 1] = grid[:, 1]
        for q in region.constraints:
            strict &= p_eval_many(q, lifted) > 0
        grid = grid[strict]

    all_pts = np.vstack([pts, grid]) if len(grid) else pts
    n_boundary = len(pts)
    for gx, gy in all_pts[n_boundary:]:
        active.append(frozenset())
        active_src.append(frozenset())

    tri = Delaunay(all_pts)
    edge_lookup = set()
    for simplex in tri.simplices:
        a, b, c = map(int, simplex)
        edge_lookup.update({(min(a, b), max(a, b)), (min(b, c), max(b, c)),
                            (min(a, c), max(a, c))})
    missing = [(a, b) for a, b, _ in boundary_edges
               if (min(a, b), max(a, b)) not in edge_lookup]
    if missing:
        raise MeshError(f"boundary chords missing from the triangulation: {missing[:5]}")

    centroids = all_pts[tri.simplices].mean(axis=1)
    keep = _point_in_loops_mask(centroids, seg_arr)
    tris = tri.simplices[keep].astype(int)

    # enforce counterclockwise orientation
    v0 = all_pts[tris[:, 0]]
    d1 = all_pts[tris[:, 1]] - v0
    d2 = all_pts[tris[:, 2]] - v0
    cross = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    flip = cross < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]

    mesh = LabeledMesh(all_pts, tris, active, active_src,
                       boundary_edges, arcs, region, density)
    _verify_mesh(mesh)
    return mesh


def _verify_mesh(mesh: LabeledMesh):
    """Check boundary conformity and the disjoint-active-set edge property."""
    edge_count: dict[tuple[int, int], int] = {}
    for a, b, c in mesh.triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            e = (min(int(u), int(v)), max(int(u), int(v)))
            edge_count[e] = edge_count.get(e, 0) + 1
    declared = {(min(a, b), max(a, b)) for a, b, _ in mesh.boundary_edges}
    for e, cnt in edge_count.items():
        if cnt > 2:
            raise MeshError(f"edge {e} borders {cnt} triangles")
        if cnt == 1 and e not in declared:
            raise MeshError(f"undeclared boundary edge {e}")
        if cnt == 2:
            if e in declared:
                raise MeshError(f"boundary chord {e} is interior to the mesh")
            both = mesh.active[e[0]] & mesh.active[e[1]]
            if both:
                raise MeshError(
                    f"interior edge {e} joins vertices sharing colors {set(both)}")
    for e in declared:
        if edge_count.get(e, 0) != 1:
            raise MeshError(f"boundary chord {e} borders {edge_count.get(e, 0)} triangles")
