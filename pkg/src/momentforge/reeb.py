"""Reeb digraphs of coordinate functions on doubled surfaces.

Vertices with equal function value joined by an edge collapse into plateau
super-vertices first (extremal circles sit at one exact level by
construction).  A super-vertex is critical when its up-link or down-link in
the collapsed complex is empty or disconnected.  The graph is then assembled
by slicing: level-set components at each critical value become candidate
nodes, open slabs between consecutive critical values decompose into product
pieces, and chains of pieces through non-critical level components merge
into single edges.  Each edge is oriented from its lower node to its upper
node, and every node records how many distinct critical plateaus it absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .doubler import DoubledSurface


class ReebError(ValueError):
    pass


@dataclass(frozen=True)
class ReebVertex:
    level: float
    degree_up: int
    degree_down: int
    is_extremal: bool
    critical_cluster_count: int


@dataclass(frozen=True)
class ReebGraph:
    vertices: tuple[ReebVertex, ...]
    edges: tuple[tuple[int, int], ...]  # (lower vertex index, upper vertex index)
    components: int

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def betti1(self) -> int:
        return self.num_edges - self.num_vertices + self.components

    def degree_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for v in self.vertices:
            d = v.degree_up + v.degree_down
            hist[d] = hist.get(d, 0) + 1
        return dict(sorted(hist.items()))


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def reeb_graph(s: DoubledSurface, axis: int) -> ReebGraph:
    """Reeb digraph of an ambient coordinate on an embedded doubled surface.

    ``axis`` is 1-based; a negative value sweeps the same coordinate in the
    reverse direction.
    """
    if s.embedded is None:
        raise ReebError("surface must be embedded before taking a Reeb graph")
    col = abs(axis) - 1
    if not 0 <= col < s.embedded.shape[1]:
        raise ReebError(f"axis {axis} out of range")
    values = np.asarray(s.embedded[:, col], dtype=float)
    if axis < 0:
        values = -values
    return reeb_graph_from_values(s.triangles, values)


def reeb_graph_from_values(triangles: np.ndarray, values: np.ndarray) -> ReebGraph:
    """Reeb digraph of arbitrary per-vertex values on a closed triangle mesh."""
    triangles = np.asarray(triangles, dtype=int)
    values = np.asarray(values, dtype=float)
    nv = len(values)

    edges = set()
    for a, b, c in triangles:
        edges.add((min(a, b), max(a, b)))
        edges.add((min(b, c), max(b, c)))
        edges.add((min(a, c), max(a, c)))

    # 1. plateau collapse along equal-value edges
    plateau = _UnionFind()
    for v in range(nv):
        plateau.add(v)
    for a, b in edges:
        if values[a] == values[b]:
            plateau.union(a, b)
    super_of = np.array([plateau.find(v) for v in range(nv)])

    # 2. critical super-vertices by up/down link connectivity
    up_links: dict[int, _UnionFind] = {}
    down_links: dict[int, _UnionFind] = {}
    for v in range(nv):
        sv = int(super_of[v])
        up_links.setdefault(sv, _UnionFind())
        down_links.setdefault(sv, _UnionFind())
    for a, b in edges:
        sa, sb = int(super_of[a]), int(super_of[b])
        if sa == sb:
            continue
        if values[sb] > values[sa]:
            lo, hi = sa, sb
        else:
            lo, hi = sb, sa
        up_links[lo].add(hi)
        down_links[hi].add(lo)
    for a, b, c in triangles:
        sa, sb, sc = int(super_of[a]), int(super_of[b]), int(super_of[c])
        for x, y, z in ((sa, sb, sc), (sb, sc, sa), (sc, sa, sb)):
            if y == x or z == x or y == z:
                continue
            if values[y] > values[x] and values[z] > values[x]:
                up_links[x].union(y, z)
            elif values[y] < values[x] and values[z] < values[x]:
                down_links[x].union(y, z)

    critical: set[int] = set()
    for sv in up_links:
        n_up = len({up_links[sv].find(t) for t in list(up_links[sv].parent)})
        n_down = len({down_links[sv].find(t) for t in list(down_links[sv].parent)})
        if n_up != 1 or n_down != 1:
            critical.add(sv)

    if not critical:
        raise ReebError("no critical vertices found on a closed surface")

    crit_levels = sorted({float(values[sv]) for sv in critical})

    # 3. level-set components at each critical level
    def level_components(w: float) -> _UnionFind:
        uf = _UnionFind()
        for a, b, c in triangles:
            items = []
            for v in (int(a), int(b), int(c)):
                if values[v] == w:
                    items.append(("v", v))
            for u, v in ((a, b), (b, c), (c, a)):
                u, v = int(u), int(v)
                lo, hi = (u, v) if values[u] < values[v] else (v, u)
                if values[lo] < w < values[hi]:
                    items.append(("e", min(u, v), max(u, v)))
            for it in items:
                uf.add(it)
            for i1, i2 in zip(items, items[1:]):
                uf.union(i1, i2)
        return uf

    level_ufs = {w: level_components(w) for w in crit_levels}

    # nodes: level components; a node is critical iff it contains a critical
    # super-vertex, counting the distinct critical plateaus it absorbed
    node_ids: dict[tuple[float, object], int] = {}
    node_levels: list[float] = []
    node_clusters: dict[int, set[int]] = {}

    def node_of(w: float, item) -> int:
        root = level_ufs[w].find(item)
        key = (w, root)
        if key not in node_ids:
            node_ids[key] = len(node_levels)
            node_levels.append(w)
            node_clusters[node_ids[key]] = set()
        return node_ids[key]

    for sv in sorted(critical):
        w = float(values[sv])
        members = [v for v in range(nv) if super_of[v] == sv]
        nid = node_of(w, ("v", members[0]))
        for m in members[1:]:
            if node_of(w, ("v", m)) != nid:
                raise ReebError("critical plateau split across level components")
        node_clusters[nid].add(int(sv))

    # 4. slab components between consecutive critical levels
    chain = _UnionFind()
    slab_lower: dict = {}
    slab_upper: dict = {}
    slab_ids = []
    for w1, w2 in zip(crit_levels, crit_levels[1:]):
        uf = _UnionFind()
        for a, b, c in triangles:
            items = []
            for v in (int(a), int(b), int(c)):
                if w1 < values[v] < w2:
                    items.append(("v", v))
            for u, v in ((a, b), (b, c), (c, a)):
                u, v = int(u), int(v)
                lo, hi = (u, v) if values[u] <= values[v] else (v, u)
                if values[lo] < w2 and values[hi] > w1 and values[lo] != values[hi]:
                    items.append(("e", min(u, v), max(u, v)))
            for it in items:
                uf.add(it)
            for i1, i2 in zip(items, items[1:]):
                uf.union(i1, i2)
        touch_low: dict = {}
        touch_high: dict = {}
        for it in list(uf.parent):
            root = uf.find(it)
            if it[0] == "v":
                continue
            _, i, j = it
            lo, hi = (i, j) if values[i] < values[j] else (j, i)
            if values[lo] <= w1:
                low_item = ("e", i, j) if values[lo] < w1 else ("v", lo)
                nid = node_of(w1, low_item)
                if touch_low.setdefault(root, nid) != nid:
                    raise ReebError("slab component touches two lower nodes")
            if values[hi] >= w2:
                high_item = ("e", i, j) if values[hi] > w2 else ("v", hi)
                nid = node_of(w2, high_item)
                if touch_high.setdefault(root, nid) != nid:
                    raise ReebError("slab component touches two upper nodes")
        for root in {uf.find(it) for it in list(uf.parent)}:
            if root not in touch_low or root not in touch_high:
                raise ReebError("slab component does not span its slab")
            sid = ("slab", w1, root)
            chain.add(sid)
            slab_lower[sid] = touch_low[root]
            slab_upper[sid] = touch_high[root]
            slab_ids.append(sid)

    # 5. merge slab pieces through non-critical level components
    above_of: dict[int, list] = {}
    below_of: dict[int, list] = {}
    for sid in slab_ids:
        above_of.setdefault(slab_lower[sid], []).append(sid)
        below_of.setdefault(slab_upper[sid], []).append(sid)
    for nid in range(len(node_levels)):
        if node_clusters.get(nid):
            continue
        lower = below_of.get(nid, [])
        upper = above_of.get(nid, [])
        if len(lower) != 1 or len(upper) != 1:
            raise ReebError("non-critical level component is not a simple pass-through")
        chain.union(lower[0], upper[0])

    # 6. emit Reeb vertices (critical nodes) and chained edges
    crit_nodes = [nid for nid in range(len(node_levels)) if node_clusters.get(nid)]
    order = sorted(crit_nodes, key=lambda nid: (node_levels[nid], min(node_clusters[nid])))
    reeb_index = {nid: k for k, nid in enumerate(order)}

    chain_ends: dict = {}
    for sid in slab_ids:
        root = chain.find(sid)
        rec = chain_ends.setdefault(root, {})
        lo, hi = slab_lower[sid], slab_upper[sid]
        if node_clusters.get(lo):
            rec["low"] = reeb_index[lo]
        if node_clusters.get(hi):
            rec["high"] = reeb_index[hi]

    edges_out = []
    for root in sorted(chain_ends, key=str):
        rec = chain_ends[root]
        if "low" not in rec or "high" not in rec:
            raise ReebError("dangling Reeb edge chain")
        edges_out.append((rec["low"], rec["high"]))
    edges_out.sort()

    deg_up = [0] * len(order)
    deg_down = [0] * len(order)
    for lo, hi in edges_out:
        deg_up[lo] += 1
        deg_down[hi] += 1

    guf = _UnionFind()
    for k in range(len(order)):
        guf.add(k)
    for lo, hi in edges_out:
        guf.union(lo, hi)
    components = len({guf.find(k) for k in range(len(order))})

    vertices = tuple(
        ReebVertex(level=float(node_levels[nid]),
                   degree_up=deg_up[k], degree_down=deg_down[k],
                   is_extremal=(deg_up[k] == 0 or deg_down[k] == 0),
                   critical_cluster_count=len(node_clusters[nid]))
        for k, nid in enumerate(order))
    return ReebGraph(vertices, tuple(edges_out), components)


def reeb_stats(g: ReebGraph) -> dict:
    """Degree histogram and the summary counts used by the scenario reports."""
    extremal = [v for v in g.vertices if v.is_extremal]
    non_extremal = [v for v in g.vertices if not v.is_extremal]
    return {
        "num_vertices": g.num_vertices,
        "num_edges": g.num_edges,
        "betti1": g.betti1,
        "degree_histogram": g.degree_histogram(),
        "extremal": sorted((v.degree_up + v.degree_down, v.critical_cluster_count)
                           for v in extremal),
        "non_extremal": sorted((v.degree_up + v.degree_down, v.critical_cluster_count)
                               for v in non_extremal),
        "max_critical_cluster_count": max((v.critical_cluster_count
                                           for v in g.vertices), default=0),
    }
