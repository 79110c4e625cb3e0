"""Aspect-ratio elimination: contracted per-scale graphs and the star set.

For scale k, the contracted graph keeps original edges of weight at most
2**(k+2) and contracts every edge of weight strictly below (eps/n) * 2**k.
Contractions across all scales form a laminar family of "nodes"; every merge
of a smaller node into a larger one adds star edges from the surviving
center to the absorbed vertices, padded so they can never undershoot true
distances.  Contracted-graph edge weights carry the same padding:

    W(X, Y) = w(x, y) + (eps/n) * 2**k * (|X| + |Y|)

with (x, y) the minimum-weight original edge between the two nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph
from .util import as_fraction, smallest_pow2_exceeding
from .weights import WeightScale


def relevant_scales(graph: Graph) -> list[int]:
    """Scales k >= 1 with some edge weight in [2**k / n, 2**(k+1)].

    Only these scales can contain a vertex pair at distance in
    (2**k, 2**(k+1)], so only they need a hopset.
    """
    n = graph.n
    ks: set[int] = set()
    for _, _, w in graph.edges:
        low = max(1, (w - 1).bit_length() - 1)  # smallest k with 2**(k+1) >= w
        high = (n * w).bit_length() - 1  # largest k with 2**k <= n*w
        ks.update(range(low, high + 1))
    return sorted(ks)


@dataclass(frozen=True)
class MergeEvent:
    """One contraction: node Y (smaller) absorbed into X at a scale.

    `members_absorbed` snapshots Y's vertices at merge time; `edge` is the
    contracted original edge, which joins the merged node's spanning tree.
    """

    scale: int
    survivor_center: int
    absorbed_center: int
    members_absorbed: tuple[int, ...]
    size_after: int
    edge: tuple[int, int, int]


@dataclass
class NodesView:
    """Node structure at one scale: per-vertex center label plus per-node data."""

    scale: int
    label: list[int]  # vertex -> center of its containing node
    sizes: dict[int, int]  # center -> member count
    birth: dict[int, int]  # center -> scale of the event that formed the node (0 initial)

    def members(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.label):
            out.setdefault(c, []).append(v)
        return out


class LaminarFamily:
    """Merge histories and node spanning trees across all scales.

    Query `nodes_at(k)` for the node structure of the scale-k graph,
    `center_at(x, k)` for a single vertex (served from the per-vertex merge
    lists), and `tree_adjacency_at(k)` for the union of node spanning trees
    (contracted edges only), used to splice witness paths.
    """

    def __init__(self, n: int, eps: Fraction, events: list[MergeEvent]):
        self.n = n
        self.eps = eps
        self.events = events
        # compressed per-vertex lists: (scale, center), one entry per scale
        self.merge_lists: list[list[tuple[int, int]]] = [[(0, v)] for v in range(n)]
        for ev in events:
            for y in ev.members_absorbed:
                lst = self.merge_lists[y]
                if lst[-1][0] == ev.scale:
                    lst[-1] = (ev.scale, ev.survivor_center)
                else:
                    lst.append((ev.scale, ev.survivor_center))
        self._views: dict[int, NodesView] = {}

    def max_merge_scale(self) -> int:
        return self.events[-1].scale if self.events else 0

    def center_at(self, x: int, k: int) -> int:
        center = x
        for scale, c in self.merge_lists[x]:
            if scale > k:
                break
            center = c
        return center

    def nodes_at(self, k: int) -> NodesView:
        view = self._views.get(k)
        if view is not None:
            return view
        label = list(range(self.n))
        sizes = {v: 1 for v in range(self.n)}
        birth = {v: 0 for v in range(self.n)}
        for ev in self.events:
            if ev.scale > k:
                break
            absorbed = ev.absorbed_center
            survivor = ev.survivor_center
            for y in ev.members_absorbed:
                label[y] = survivor
            sizes[survivor] += sizes.pop(absorbed)
            birth.pop(absorbed)
            birth[survivor] = ev.scale
        # relabel chains: members_absorbed snapshots make labels direct already
        view = NodesView(k, label, sizes, birth)
        self._views[k] = view
        return view

    def tree_adjacency_at(self, k: int) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {}
        for ev in self.events:
            if ev.scale > k:
                break
            u, v, w = ev.edge
            adj.setdefault(u, []).append((v, w))
            adj.setdefault(v, []).append((u, w))
        return adj


def contraction_scale(w: int, n: int, eps: Fraction) -> int:
    """Smallest scale k at which an edge of weight w is contracted.

    Contraction is strict: w < (eps/n) * 2**k, i.e. 2**k > w*n/eps.
    """
    return smallest_pow2_exceeding(Fraction(w * n) / eps)


def build_laminar(graph: Graph, eps) -> LaminarFamily:
    """Sweep edges by ascending weight, contracting each at its scale.

    Union by size; equal sizes keep the lower-center-id node as survivor.
    Edges whose endpoints already share a node contract silently (no event).
    """
    eps = as_fraction(eps)
    if not (0 < eps < Fraction(1, 2)):
        raise ValueError("contraction eps must satisfy 0 < eps < 1/2")
    n = graph.n
    parent = list(range(n))
    size = [1] * n
    members: list[list[int]] = [[v] for v in range(n)]

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    events: list[MergeEvent] = []
    for u, v, w in sorted(graph.edges, key=lambda e: (e[2], e[0], e[1])):
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        k = contraction_scale(w, n, eps)
        if size[ru] < size[rv] or (size[ru] == size[rv] and rv < ru):
            ru, rv = rv, ru
        # ru survives, rv absorbed
        absorbed = tuple(members[rv])
        parent[rv] = ru
        size[ru] += size[rv]
        members[ru].extend(members[rv])
        members[rv] = []
        events.append(
            MergeEvent(
                scale=k,
                survivor_center=ru,
                absorbed_center=rv,
                members_absorbed=absorbed,
                size_after=size[ru],
                edge=(u, v, w),
            )
        )
    events.sort(key=lambda ev: ev.scale)
    return LaminarFamily(n, eps, events)


@dataclass(frozen=True)
class StarEdge:
    """Hopset edge from a node center to an absorbed vertex."""

    u: int  # surviving center
    v: int  # absorbed vertex
    scale: int
    weight: Fraction
    group_size: int


def star_edges(laminar: LaminarFamily) -> list[StarEdge]:
    """One padded edge per (merge event, absorbed vertex).

    Weight (eps/n) * 2**k * |U| dominates the true center-to-vertex distance
    because the node's spanning tree connects them with at most |U|-1 edges,
    each below (eps/n) * 2**k.  The total count is at most n*log2(n); that
    bound is structural, so it is asserted here rather than reported.
    """
    n, eps = laminar.n, laminar.eps
    out: list[StarEdge] = []
    for ev in laminar.events:
        w = eps * (2**ev.scale) * ev.size_after / n
        for z in ev.members_absorbed:
            out.append(StarEdge(ev.survivor_center, z, ev.scale, w, ev.size_after))
    assert len(out) <= n * math.log2(n) + 1e-9, "star set exceeded n*log2(n)"
    return out


@dataclass
class ScaleGraph:
    """The contracted graph of one scale, ready for a single-scale build.

    `centers` lists every node (by center id); only `active_centers` (degree
    >= 1) participate in hopset construction, indexed 0..active_count-1 in
    `adj`.  `edges` carry exact padded weights as scaled integers over
    `wscale` together with the minimum-weight original edge they came from.
    """

    scale: int
    eps: Fraction
    wscale: WeightScale
    centers: list[int]
    sizes: dict[int, int]
    active_centers: list[int]
    adj: list[list[tuple[int, int]]]
    edges: list[tuple[int, int, int, tuple[int, int, int]]]  # (cu, cv, W, base edge)

    @property
    def active_count(self) -> int:
        return len(self.active_centers)

    def index_of(self, center: int) -> int:
        return self._index[center]

    def base_edge(self, cu: int, cv: int) -> tuple[int, int, int]:
        """Original (x, y, w) for node pair, oriented so x lies in cu's node."""
        key = (cu, cv) if cu < cv else (cv, cu)
        x, y, w = self._base[key]
        return (x, y, w) if cu == key[0] else (y, x, w)

    def finalize(self, label: list[int]):
        self._index = {c: i for i, c in enumerate(self.active_centers)}
        self._base = {}
        self._label = label
        for cu, cv, _, (x, y, w) in self.edges:
            key = (cu, cv) if cu < cv else (cv, cu)
            self._base[key] = (x, y, w) if label[x] == key[0] else (y, x, w)
        return self

    def label_of(self, vertex: int) -> int:
        return self._label[vertex]


def materialize_scale_graph(
    graph: Graph,
    laminar: LaminarFamily,
    k: int,
    wscale: WeightScale | None = None,
) -> ScaleGraph:
    """Build the scale-k contracted graph from the laminar family.

    Keeps original edges of weight <= 2**(k+2) whose endpoints lie in
    different nodes, deduplicated per node pair by minimum original weight
    (ties by (weight, u, v) for determinism).
    """
    eps = laminar.eps
    n = graph.n
    if wscale is None:
        wscale = WeightScale(n * eps.denominator)
    view = laminar.nodes_at(k)
    label = view.label
    cutoff = 2 ** (k + 2)
    best: dict[tuple[int, int], tuple[int, int, int]] = {}
    for u, v, w in graph.edges:
        if w > cutoff:
            continue
        cu, cv = label[u], label[v]
        if cu == cv:
            continue
        key = (cu, cv) if cu < cv else (cv, cu)
        cand = (w, u, v)
        if key not in best or cand < best[key]:
            best[key] = cand
    pad_unit = wscale.to_scaled(eps * 2**k / n)  # exact by wscale construction
    edges = []
    active = set()
    for (cu, cv), (w, u, v) in sorted(best.items()):
        big_w = w * wscale.den + pad_unit * (view.sizes[cu] + view.sizes[cv])
        edges.append((cu, cv, big_w, (u, v, w)))
        active.add(cu)
        active.add(cv)
    active_centers = sorted(active)
    index = {c: i for i, c in enumerate(active_centers)}
    adj: list[list[tuple[int, int]]] = [[] for _ in active_centers]
    for cu, cv, big_w, _ in edges:
        iu, iv = index[cu], index[cv]
        adj[iu].append((iv, big_w))
        adj[iv].append((iu, big_w))
    sg = ScaleGraph(
        scale=k,
        eps=eps,
        wscale=wscale,
        centers=sorted(view.sizes),
        sizes=dict(view.sizes),
        active_centers=active_centers,
        adj=adj,
        edges=edges,
    )
    return sg.finalize(label)


def activity_stats(graph: Graph, laminar: LaminarFamily, scales) -> dict:
    """Active-node accounting across scales.

    A node is active at scale k if it has degree >= 1 in the scale-k graph.
    Nodes are identified by (center, birth scale) since the same center can
    head successively larger nodes.  Returns per-scale active counts, the
    per-node activity spans, and the claimed per-node bound log2(n/eps) + 2
    (reported, not asserted: see the verification module's outlier policy).
    """
    eps = laminar.eps
    per_node: dict[tuple[int, int], int] = {}
    n_k: dict[int, int] = {}
    for k in scales:
        view = laminar.nodes_at(k)
        label = view.label
        cutoff = 2 ** (k + 2)
        active: set[int] = set()
        for u, v, w in graph.edges:
            if w > cutoff:
                continue
            cu, cv = label[u], label[v]
            if cu != cv:
                active.add(cu)
                active.add(cv)
        n_k[k] = len(active)
        for c in active:
            key = (c, view.birth[c])
            per_node[key] = per_node.get(key, 0) + 1
    bound = math.log2(graph.n / eps) + 2
    max_span = max(per_node.values(), default=0)
    return {
        "n_k": n_k,
        "total_active": sum(n_k.values()),
        "per_node_scales": per_node,
        "max_activity": max_span,
        "activity_bound": bound,
        "nodes_over_bound": sorted(
            key for key, cnt in per_node.items() if cnt > bound
        ),
    }
