import random
from fractions import Fraction as F

import pytest

from hopsets import (
    ClusterPartition,
    Graph,
    WeightScale,
    bounded_dijkstra,
    compute_schedule,
    er_graph,
    hop_limited_bellman_ford,
    hopset_from_single_scale,
    build_single_scale,
    interconnect_phase,
    path_graph,
    supercluster_phase,
    verify_stretch,
)
from hopsets.single_scale import Cluster


def scaled_adj(graph, ws):
    return [[(v, w * ws.den) for v, w in nbrs] for nbrs in graph.adj]


def singleton_partition(n, phase=0):
    return ClusterPartition(phase, [Cluster(v, (v,)) for v in range(n)])


class ScriptedRng:
    """Feeds a fixed sequence to random(); sampling hooks for phase tests."""

    def __init__(self, values):
        self.values = list(values)

    def random(self):
        return self.values.pop(0)


@pytest.fixture
def sched_16():
    # alpha = eps**2 * Rhat = 16, so delta_0 = 16 and delta_0/2 = 8
    return compute_schedule(64, 2, F(1, 2), F(1, 10), 1600)


class TestSuperclusterPhase:
    def test_probability_zero_leaves_all_unclustered(self, sched_16):
        g = path_graph(5, 1)
        ws = WeightScale(100)
        nxt, star, unclustered, _ = supercluster_phase(
            scaled_adj(g, ws),
            singleton_partition(5),
            0,
            sched_16,
            ws,
            random.Random(1),
            sample_probability=0.0,
        )
        assert nxt.clusters == [] and star == []
        assert len(unclustered) == 5

    def test_probability_one_samples_everything(self, sched_16):
        g = path_graph(5, 1)
        ws = WeightScale(100)
        nxt, star, unclustered, _ = supercluster_phase(
            scaled_adj(g, ws),
            singleton_partition(5),
            0,
            sched_16,
            ws,
            random.Random(1),
            sample_probability=1.0,
        )
        assert unclustered == [] and star == []
        assert len(nxt.clusters) == 5

    def test_collinear_singletons_middle_sampled(self, sched_16):
        # three vertices spaced delta_0/2 = 8 apart; only the middle sampled
        g = Graph.from_edges(3, [(0, 1, 8), (1, 2, 8)])
        ws = WeightScale(100)
        rng = ScriptedRng([0.99, 0.0, 0.99])  # ascending center order: 0, 1, 2
        nxt, star, unclustered, _ = supercluster_phase(
            scaled_adj(g, ws), singleton_partition(3), 0, sched_16, ws, rng, 0.5
        )
        assert unclustered == []
        assert len(nxt.clusters) == 1 and nxt.clusters[0].center == 1
        assert sorted(nxt.clusters[0].members) == [0, 1, 2]
        assert sorted((e.u, e.v, e.w) for e in star) == [
            (1, 0, 8 * ws.den),
            (1, 2, 8 * ws.den),
        ]

    def test_star_edge_weight_is_exact_distance(self, sched_16):
        g = er_graph(40, 0.2, 1, 3, seed=5)
        ws = WeightScale(100)
        adj = scaled_adj(g, ws)
        nxt, star, _, _ = supercluster_phase(
            adj, singleton_partition(40), 1, sched_16, ws, random.Random(7)
        )
        for e in star:
            dist, _ = bounded_dijkstra(adj, e.u, None)
            assert dist[e.v] == e.w


class TestInterconnectPhase:
    def test_single_cluster_no_edges(self, sched_16):
        g = path_graph(3, 1)
        ws = WeightScale(100)
        edges = interconnect_phase(
            scaled_adj(g, ws), [Cluster(0, (0,))], 0, sched_16, ws
        )
        assert edges == []

    def test_boundary_distance_inclusive(self, sched_16):
        # two centers at distance exactly delta_0/2 = 8
        g = Graph.from_edges(2, [(0, 1, 8)])
        ws = WeightScale(100)
        edges = interconnect_phase(
            scaled_adj(g, ws), singleton_partition(2).clusters, 0, sched_16, ws
        )
        assert [(e.u, e.v, e.w) for e in edges] == [(0, 1, 8 * ws.den)]

    def test_unit_path_radius_three(self, sched_16):
        # ten singletons on a unit path with delta_0/2 = 8 -> scale to radius 3:
        # use weights of 8/3 impossible, so use delta via different Rhat
        sched = compute_schedule(64, 2, F(1, 2), F(1, 10), 600)  # alpha=6, half=3
        g = path_graph(10, 1)
        ws = WeightScale(100)
        edges = interconnect_phase(
            scaled_adj(g, ws), singleton_partition(10).clusters, 0, sched, ws
        )
        expected = {(i, j) for i in range(10) for j in range(i + 1, 10) if j - i <= 3}
        assert {(e.u, e.v) for e in edges} == expected
        for e in edges:
            assert e.w == (e.v - e.u) * ws.den

    def test_dedup_and_visit_accounting(self, sched_16):
        g = er_graph(30, 0.3, 1, 4, seed=9)
        ws = WeightScale(100)
        visits = [0] * 30
        clusters = singleton_partition(30).clusters
        edges = interconnect_phase(
            scaled_adj(g, ws), clusters, 2, sched_16, ws, visits
        )
        pairs = [(e.u, e.v) for e in edges]
        assert len(pairs) == len(set(pairs))
        assert all(u < v for u, v in pairs)
        # every exploration visits at least its own source
        assert sum(visits) >= len(clusters)


class TestStarGraphExample:
    def test_all_pairs_interconnected_at_exact_distance(self):
        # K_{1,5}, unit weights, forced unsampled phase 0 with delta_0/2 >= 2
        g = Graph.from_edges(6, [(0, i, 1) for i in range(1, 6)])
        sched = compute_schedule(64, 2, F(1, 2), F(1, 10), 400)  # delta_0/2 = 2
        ws = WeightScale(100)
        ss = build_single_scale(
            scaled_adj(g, ws), 3, sched, ws, seed=1, sample_overrides={0: 0.0}
        )
        inter0 = [e for e in ss.edges if e.kind == "interconnect"]
        assert len(inter0) == 15  # all pairs of the 6 vertices
        for e in inter0:
            expected = 1 if 0 in (e.u, e.v) else 2
            assert e.w == expected * ws.den


class TestBuildInvariants:
    def build(self, seed=11, n=100):
        g = er_graph(n, 0.1, 1, 8, seed=5)
        sched = compute_schedule(n, 2, F(1, 2), F(1, 10), 64)
        ws = WeightScale(2 * 100)
        ss = build_single_scale(
            scaled_adj(g, ws), 5, sched, ws, seed=seed, keep_partitions=True
        )
        return g, sched, ws, ss

    def test_deterministic_for_fixed_seed(self):
        _, _, _, a = self.build(seed=3)
        _, _, _, b = self.build(seed=3)
        assert [(e.u, e.v, e.w, e.kind) for e in a.edges] == [
            (e.u, e.v, e.w, e.kind) for e in b.edges
        ]

    def test_star_edges_form_forest(self):
        _, _, _, ss = self.build()
        parent = list(range(200))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for e in ss.edges:
            if e.kind != "supercluster":
                continue
            ru, rv = find(e.u), find(e.v)
            assert ru != rv, "cycle among supercluster edges"
            parent[ru] = rv

    def test_edge_weights_are_exact_distances(self):
        g, _, ws, ss = self.build()
        adj = scaled_adj(g, ws)
        for e in ss.edges:
            dist, _ = bounded_dijkstra(adj, e.u, None)
            assert dist[e.v] == e.w

    def test_cluster_radius_claim(self):
        # entering phase i, every member sits within i star-edges of its
        # center, total length at most radius[i]
        _, sched, ws, ss = self.build()
        star_by_phase = []
        seen = 0
        for i, stats in enumerate(ss.stats):
            stars = [e for e in ss.edges if e.kind == "supercluster"][
                seen : seen + stats.star_edges
            ]
            seen += stats.star_edges
            star_by_phase.append(stars)
        nverts = len(ss.partitions[0])
        accumulated = []
        for i, clusters in enumerate(ss.partitions):
            limit = ws.to_scaled(sched.radius[i])
            if i > 0:
                accumulated.extend(star_by_phase[i - 1])
            if not accumulated:
                for c in clusters:
                    assert list(c.members) == [c.center]
                continue
            rel = [(e.u, e.v, e.w, i) for i, e in enumerate(accumulated)]
            for c in clusters:
                table = hop_limited_bellman_ford(nverts, rel, [c.center], i)
                for m in c.members:
                    d = table.distance(c.center, m)
                    assert d is not None and d <= limit

    def test_partitions_and_retired_sets_cover_all_vertices(self):
        # at every phase, live clusters plus retired unclustered sets form a
        # disjoint cover of the vertex set
        g = er_graph(80, 0.1, 1, 8, seed=17)
        sched = compute_schedule(80, 2, F(1, 2), F(1, 10), 64)
        ws = WeightScale(200)
        adj = scaled_adj(g, ws)
        partition = singleton_partition(80)
        retired = []
        for i in range(sched.ell):
            rng = random.Random(i * 7 + 1)
            nxt, _, unclustered, _ = supercluster_phase(
                adj, partition, i, sched, ws, rng
            )
            retired.extend(unclustered)
            covered = sorted(
                m for c in nxt.clusters + retired for m in c.members
            )
            assert covered == list(range(80))
            partition = nxt

    def test_partition_size_bound_mostly_holds(self):
        # |P_1| <= 2 * n**(1 - 1/kappa) in >= 90% of seeded runs
        n = 256
        g = er_graph(n, 0.05, 1, 8, seed=13)
        sched = compute_schedule(n, 2, F(1, 2), F(1, 10), 32)
        ws = WeightScale(200)
        adj = scaled_adj(g, ws)
        ok = 0
        seeds = range(20)
        for s in seeds:
            ss = build_single_scale(adj, 5, sched, ws, seed=s, keep_partitions=True)
            if len(ss.partitions[1]) <= 2 * n ** (1 - 1 / 2):
                ok += 1
        assert ok >= 0.9 * len(seeds)


class TestBandContract:
    def test_er100_band_guarantee(self):
        # oracle: hop-limited Bellman-Ford + Dijkstra via the verifier, on
        # pairs with distance in (Rhat/2, Rhat]
        g = er_graph(100, 0.1, 1, 8, seed=5)
        ws = WeightScale(200)
        adj = scaled_adj(g, ws)
        for k in (2, 3, 4):
            sched = compute_schedule(100, 2, F(1, 2), F(1, 10), 2 ** (k + 1))
            ss = build_single_scale(adj, k, sched, ws, seed=7)
            hs = hopset_from_single_scale(g, k, ss, ws)
            assert hs.effective_beta == 735
            assert hs.effective_eps == F(96, 10)
            report = verify_stretch(g, hs, pair_mode="band", band=k)
            assert report.ok, report.violations[:3]
