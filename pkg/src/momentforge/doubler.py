"""Closed surfaces from sign-vector doubling of a labeled planar mesh.

A mesh vertex v with active color set A(v) lifts to the sign vectors
sigma in {-1,+1}^l2 modulo agreement outside A(v), so it has
2^(l2-|A(v)|) copies.  Each triangle is copied once per sigma, with
orientation flipped on odd sign parity, and copies glue along boundary
chords where colors become active.  The result is checked to be a closed
surface (every edge in exactly two triangles).

``chi_stratified`` computes the same Euler characteristic without any mesh,
from the region's stratification: open face, open arcs, corners, weighted by
the number of surviving sign vectors over each stratum.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .arrangement import LiftedSystem
from .meshing import LabeledMesh
from .polynomial import p_eval_exact
from .slicer import PlanarRegion


class DoublingError(ValueError):
    pass


class EmbeddingError(ValueError):
    pass


@dataclass
class DoubledSurface:
    """Triangulated closed surface of sign-vector copies of a base mesh.

    Vertex k corresponds to base vertex ``base_vertex[k]`` with the signs
    ``free_signs[k]`` on the colors not active there (actives carry +1 by
    convention).  ``embedded`` is filled by :func:`embed` with extended
    precision ambient coordinates.
    """

    base: LabeledMesh
    l2: int
    base_vertex: np.ndarray            # (V,) int
    free_signs: list[tuple[int, ...]]  # aligned with free_colors per vertex
    triangles: np.ndarray              # (T, 3) int
    triangle_provenance: list[tuple[int, tuple[int, ...]]]
    embedded: Optional[np.ndarray] = None   # (V, ambient) longdouble
    max_residual: Optional[float] = None

    @property
    def num_vertices(self) -> int:
        return len(self.base_vertex)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def full_sign(self, vid: int) -> tuple[int, ...]:
        free = sorted(set(range(1, self.l2 + 1)) - self.base.active[self.base_vertex[vid]])
        signs = [1] * self.l2
        for color, s in zip(free, self.free_signs[vid]):
            signs[color - 1] = s
        return tuple(signs)

    def edge_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                e = (min(int(u), int(v)), max(int(u), int(v)))
                counts[e] = counts.get(e, 0) + 1
        return counts


@dataclass(frozen=True)
class SurfaceInvariants:
    chi: int
    orientable: bool
    components: int
    genus: Optional[int]

    def as_dict(self) -> dict:
        return {"chi": self.chi, "orientable": self.orientable,
                "components": self.components, "genus": self.genus}


def _sign_vectors(l2: int):
    """All sign tuples in a fixed lexicographic order (+1 before -1)."""
    out = []
    for mask in range(2 ** l2):
        out.append(tuple(1 if not (mask >> k) & 1 else -1 for k in range(l2)))
    return out


def build_double(mesh: LabeledMesh, l2: int) -> DoubledSurface:
    """Glue 2^l2 sign-indexed copies of the mesh into a closed surface."""
    all_colors = set(range(1, l2 + 1))
    for A in mesh.active:
        if not A <= all_colors:
            raise DoublingError(f"vertex colors {set(A)} exceed 1..{l2}")
    free_of = [tuple(sorted(all_colors - A)) for A in mesh.active]

    class_id: dict[tuple[int, tuple[int, ...]], int] = {}
    base_vertex: list[int] = []
    free_signs: list[tuple[int, ...]] = []

    def vid(v: int, sigma: tuple[int, ...]) -> int:
        reduced = tuple(sigma[c - 1] for c in free_of[v])
        key = (v, reduced)
        if key not in class_id:
            class_id[key] = len(base_vertex)
            base_vertex.append(v)
            free_signs.append(reduced)
        return class_id[key]

    triangles = []
    provenance = []
    for sigma in _sign_vectors(l2):
        parity = sum(1 for s in sigma if s < 0) % 2
        for t_idx, (a, b, c) in enumerate(mesh.triangles):
            A, B, C = vid(int(a), sigma), vid(int(b), sigma), vid(int(c), sigma)
            tri = (A, B, C) if parity == 0 else (A, C, B)
            triangles.append(tri)
            provenance.append((t_idx, sigma))

    surf = DoubledSurface(mesh, l2, np.array(base_vertex, dtype=int),
                          free_signs, np.array(triangles, dtype=int), provenance)
    counts = surf.edge_counts()
    bad = [(e, c) for e, c in counts.items() if c != 2]
    if bad:
        e, c = bad[0]
        u = surf.base_vertex[e[0]]
        v = surf.base_vertex[e[1]]
        raise DoublingError(
            f"non-manifold gluing: edge over base ({u}, {v}) lies in {c} triangles")
    # expected copy multiplicity over every base vertex
    mult = Counter(int(v) for v in surf.base_vertex)
    for v, A in enumerate(mesh.active):
        want = 2 ** (l2 - len(A))
        if mult.get(v, 0) != want:
            raise DoublingError(
                f"vertex {v} has {mult.get(v, 0)} copies, expected {want}")
    return surf


def chi_stratified(region: PlanarRegion, l2: int) -> int:
    """Mesh-free Euler characteristic of the doubled surface.

    Strata of the closed region contribute their compactly supported Euler
    characteristic times the number of sign vectors surviving over them:
    +1 per open face, -1 per open arc, 0 per full-circle loop, +1 per corner.
    """
    chi_region = region.euler_char
    total = (2 ** l2) * chi_region
    for loop in region.loops:
        for arc in loop:
            if arc.closed_loop:
                continue
            total -= 2 ** (l2 - 1)
    for corner in region.corners:
        total += 2 ** (l2 - len(corner.colors))
    return total


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> int:
        return sum(1 for i, p in enumerate(self.parent) if self.find(i) == i)


def surface_invariants(s: DoubledSurface) -> SurfaceInvariants:
    """Euler characteristic, connectivity, orientability and genus."""
    V = s.num_vertices
    counts = s.edge_counts()
    E = len(counts)
    F = s.num_triangles
    chi = V - E + F

    uf = _UnionFind(V)
    for a, b in counts:
        uf.union(a, b)
    components = uf.groups()

    orientable = _check_orientation(s)
    genus = None
    if orientable and components == 1:
        if chi % 2:
            raise DoublingError("odd Euler characteristic on an orientable surface")
        genus = (2 - chi) // 2
    return SurfaceInvariants(chi, orientable, components, genus)


def _check_orientation(s: DoubledSurface) -> bool:
    """True iff triangle orientations can be made globally consistent.

    The construction seeds copies with parity-alternating orientations, which
    should already be consistent; the check walks the adjacency anyway and
    reports failures honestly for arbitrary inputs.
    """
    edge_tris: dict[tuple[int, int], list[tuple[int, bool]]] = {}
    for t_idx, (a, b, c) in enumerate(s.triangles):
        for u, v in ((a, b), (b, c), (c, a)):
            e = (min(int(u), int(v)), max(int(u), int(v)))
            forward = (int(u), int(v)) == e
            edge_tris.setdefault(e, []).append((t_idx, forward))

    flip = [None] * s.num_triangles
    for seed in range(s.num_triangles):
        if flip[seed] is not None:
            continue
        flip[seed] = False
        stack = [seed]
        while stack:
            t = stack.pop()
            a, b, c = s.triangles[t]
            for u, v in ((a, b), (b, c), (c, a)):
                e = (min(int(u), int(v)), max(int(u), int(v)))
                for t2, fwd2 in edge_tris[e]:
                    if t2 == t:
                        continue
                    fwd1 = (int(u), int(v)) == e
                    # consistent orientation traverses a shared edge oppositely:
                    # flips must differ exactly when the raw directions agree
                    want = (not flip[t]) if fwd1 == fwd2 else flip[t]
                    if flip[t2] is None:
                        flip[t2] = want
                        stack.append(t2)
                    elif flip[t2] != want:
                        return False
    return True


def _sqrt_hi_lo(value: Fraction) -> np.longdouble:
    """Extended-precision sqrt of an exact rational via a double seed plus an
    exactly computed correction term."""
    if value == 0:
        return np.longdouble(0.0)
    hi = math.sqrt(float(value))
    if hi == 0.0:
        return np.longdouble(0.0)
    corr = float(value - Fraction(hi) ** 2) / (2.0 * hi)
    return np.longdouble(hi) + np.longdouble(corr)


def _longdouble_to_fraction(x: np.longdouble) -> Fraction:
    if x == 0:
        return Fraction(0)
    m, e = np.frexp(x)
    hi = np.floor(m * np.longdouble(2.0 ** 32))
    lo = np.floor((m * np.longdouble(2.0 ** 32) - hi) * np.longdouble(2.0 ** 32))
    num = int(hi) * (1 << 32) + int(lo)
    return Fraction(num, 1 << 64) * Fraction(2) ** int(e)


def embed(s: DoubledSurface, ls: LiftedSystem,
          tol: float = 1e-9) -> DoubledSurface:
    """Attach ambient coordinates (x, y) with y_i = sign_i sqrt(F_i(x)).

    Color products are evaluated exactly at the (rational) mesh coordinates;
    square roots are taken in extended precision so the reported residual
    max |F_i - y_i^2| stays at the representation floor.  Radicands below
    ``-tol`` abort with the offending vertex.
    """
    cm = ls.base.colors
    if any(cm.sphere_dim[i] != 0 for i in range(1, cm.l2 + 1)):
        raise EmbeddingError("doubling requires all sphere dimensions 0")
    mesh = s.base
    lifted = mesh.lift_points()

    F_vals: list[list[Fraction]] = []
    for i in range(1, cm.l2 + 1):
        Fi = ls.color_polys[i - 1]
        F_vals.append([p_eval_exact(Fi, tuple(row)) for row in lifted])

    y_of: list[list[np.longdouble]] = []
    max_residual = Fraction(0)
    for i in range(1, cm.l2 + 1):
        col = []
        for v, val in enumerate(F_vals[i - 1]):
            if val < -tol:
                raise EmbeddingError(
                    f"vertex {v} has color-{i} product {float(val):.3e} < -tol; "
                    "base mesh leaves the closed region")
            y = _sqrt_hi_lo(val) if val > 0 else np.longdouble(0.0)
            resid = abs(val - _longdouble_to_fraction(y) ** 2)
            if resid > max_residual:
                max_residual = resid
            col.append(y)
        y_of.append(col)

    emb = np.zeros((s.num_vertices, ls.ambient_dim), dtype=np.longdouble)
    for vid in range(s.num_vertices):
        v = int(s.base_vertex[vid])
        emb[vid, : ls.base.n] = lifted[v]
        signs = s.full_sign(vid)
        for i in range(1, cm.l2 + 1):
            emb[vid, ls.y_slice(i)] = signs[i - 1] * y_of[i - 1][v]
    return replace(s, embedded=emb, max_residual=float(max_residual))
