"""Exploration primitives: depth-bounded Dijkstra and hop-limited Bellman-Ford.

Everything here works on adjacency lists of (neighbor, weight) with plain
integer weights (already rescaled by the build's WeightScale when weights
are fractional).  All distances returned are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappop, heappush


@dataclass
class ExplorationForest:
    """Result of a multi-source bounded Dijkstra.

    Only reached vertices appear in the maps.  For every reached v,
    `root[v]` is the source whose tree v joined, and following `parent`
    pointers from v ends at that root with edge weights summing to dist[v].
    """

    dist: dict[int, int]
    root: dict[int, int]
    parent: dict[int, int | None]

    def path_from_root(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path


def multi_source_bounded_dijkstra(
    adj: list[list[tuple[int, int]]],
    roots,
    depth: int | None,
) -> ExplorationForest:
    """Dijkstra from a set of roots, exploring to distance <= depth (inclusive).

    Equidistant vertices join the tree of the lowest-id root: the heap is
    keyed by (distance, root), so label propagation is lexicographic and the
    resulting forest is deterministic regardless of container order.
    """
    roots = sorted(set(roots))
    if not roots:
        raise ValueError("roots must be non-empty")
    dist: dict[int, int] = {}
    rootof: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    best: dict[int, tuple[int, int]] = {}
    heap = []
    for r in roots:
        best[r] = (0, r)
        heappush(heap, (0, r, r, None))
    while heap:
        d, r, v, par = heappop(heap)
        if v in dist or best.get(v) != (d, r):
            continue
        dist[v] = d
        rootof[v] = r
        parent[v] = par
        for u, w in adj[v]:
            if u in dist:
                continue
            nd = d + w
            if depth is not None and nd > depth:
                continue
            cand = (nd, r)
            if u not in best or cand < best[u]:
                best[u] = cand
                heappush(heap, (nd, r, u, v))
    return ExplorationForest(dist, rootof, parent)


def bounded_dijkstra(
    adj: list[list[tuple[int, int]]],
    source: int,
    depth: int | None,
    visit_counter: list[int] | None = None,
) -> tuple[dict[int, int], dict[int, int | None]]:
    """Single-source Dijkstra to distance <= depth (inclusive).

    Returns exact distances and parent pointers over the reached set.  When
    `visit_counter` is given, counter[v] is incremented once per reached
    vertex; interconnection load statistics are accumulated through it.
    """
    dist: dict[int, int] = {}
    parent: dict[int, int | None] = {source: None}
    seen: dict[int, int] = {source: 0}
    heap = [(0, source)]
    while heap:
        d, v = heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        if visit_counter is not None:
            visit_counter[v] += 1
        for u, w in adj[v]:
            if u in dist:
                continue
            nd = d + w
            if depth is not None and nd > depth:
                continue
            if u not in seen or nd < seen[u]:
                seen[u] = nd
                parent[u] = v
                heappush(heap, (nd, u))
    return dist, parent


def dijkstra_all(adj: list[list[tuple[int, int]]], source: int) -> list[int | None]:
    """Unbounded single-source distances as a dense array (None = unreachable)."""
    dist, _ = bounded_dijkstra(adj, source, None)
    out: list[int | None] = [None] * len(adj)
    for v, d in dist.items():
        out[v] = d
    return out


@dataclass
class HopLimitedTable:
    """Exact t-limited distances d^(t) from a set of sources.

    dist[s][v] is the minimum length of a path with at most t edges (None if
    no such path), computed with two-buffer rounds so round j only reads
    round j-1 values.  pred[s][v] is (u, tag) for the winning last edge.
    """

    t: int
    sources: list[int]
    dist: dict[int, list[int | None]]
    pred: dict[int, list[tuple[int, object] | None]]

    def distance(self, s: int, v: int) -> int | None:
        return self.dist[s][v]


def hop_limited_bellman_ford(
    n: int,
    edges,
    sources,
    t: int,
) -> HopLimitedTable:
    """Exact at-most-t-edges distances from each source.

    `edges` is an iterable of (u, v, w, tag) treated as undirected; `tag`
    is opaque and comes back in predecessor entries (the hopset machinery
    passes ("g", i) / ("h", i) tags for path extraction).  Rounds are
    double-buffered, never in-place, so the result is d^(t) exactly rather
    than something between d^(t) and d.  Iteration stops early once a round
    changes nothing: positive weights guarantee a fixed point within n-1
    rounds, and the fixed point equals d^(t') for every t' beyond it.

    Ties on equal distance are broken toward the lexicographically smallest
    (neighbor id, tag) so predecessor trees are deterministic.
    """
    if t < 0:
        raise ValueError("hop budget must be >= 0")
    rel = []
    for u, v, w, tag in edges:
        rel.append((u, v, w, tag))
        rel.append((v, u, w, tag))
    table_dist: dict[int, list[int | None]] = {}
    table_pred: dict[int, list[tuple[int, object] | None]] = {}
    src_list = sorted(set(sources))
    rounds_cap = min(t, max(0, n - 1))
    for s in src_list:
        cur: list[int | None] = [None] * n
        cur[s] = 0
        pred: list[tuple[int, object] | None] = [None] * n
        stamp = [-1] * n  # round in which nxt[v] was last written
        for rnd in range(rounds_cap):
            nxt = cur[:]
            changed = False
            for u, v, w, tag in rel:
                du = cur[u]
                if du is None:
                    continue
                cand = du + w
                dv = nxt[v]
                if dv is None or cand < dv:
                    nxt[v] = cand
                    pred[v] = (u, tag)
                    stamp[v] = rnd
                    changed = True
                elif cand == dv and stamp[v] == rnd and (u, tag) < pred[v]:
                    pred[v] = (u, tag)
            if not changed:
                break
            cur = nxt
        table_dist[s] = cur
        table_pred[s] = pred
    return HopLimitedTable(t, src_list, table_dist, table_pred)
