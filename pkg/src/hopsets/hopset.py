"""Hopset assembly: multi-scale union, scale reduction, witnesses, file I/O.

Two modes.  `direct` builds one single-scale hopset per distance band of the
input graph itself, enumerating bands up to an aspect-ratio bound.
`reduced` contracts the graph per scale first, builds single-scale hopsets
on the contracted graphs, and adds the star set; this touches only scales
holding an edge weight and yields the (6*beta+5, eps) guarantee
independently of the aspect ratio.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

from .explore import bounded_dijkstra
from .graph import Graph, validate
from .scale_reduction import (
    LaminarFamily,
    ScaleGraph,
    build_laminar,
    materialize_scale_graph,
    relevant_scales,
    star_edges,
)
from .single_scale import PhaseSchedule, build_single_scale, compute_schedule
from .util import as_fraction, child_seed, lcm
from .weights import WeightScale


class HopsetError(ValueError):
    pass


KIND_ORDER = {"star": 0, "supercluster": 1, "interconnect": 2}


@dataclass(frozen=True)
class HopsetParams:
    """User-facing build parameters.

    eps_target is the stretch slack of the final guarantee; rescaling to the
    internal per-phase eps happens in `plan`.  Builds are deterministic for
    fixed (graph, params): every scale and phase derives its own RNG stream
    from `seed`.
    """

    kappa: int = 2
    rho: Fraction = Fraction(1, 2)
    eps_target: Fraction = Fraction(3, 10)
    seed: int = 0
    mode: str = "reduced"  # "reduced" | "direct"
    degree_mode: str = "basic"  # "basic" | "refined"
    path_reporting: bool = False

    @staticmethod
    def make(**kw) -> "HopsetParams":
        if "rho" in kw:
            kw["rho"] = as_fraction(kw["rho"])
        if "eps_target" in kw:
            kw["eps_target"] = as_fraction(kw["eps_target"])
        return HopsetParams(**kw)

    def validated(self) -> "HopsetParams":
        if self.mode not in ("reduced", "direct"):
            raise HopsetError(f"unknown mode {self.mode!r}")
        if self.degree_mode not in ("basic", "refined"):
            raise HopsetError(f"unknown degree_mode {self.degree_mode!r}")
        if self.kappa < 2:
            raise HopsetError("kappa must be an integer >= 2")
        if self.kappa * self.rho < 1:
            raise HopsetError(
                f"kappa*rho = {self.kappa * self.rho} < 1; choose rho >= 1/kappa"
            )
        if self.rho > Fraction(1, 2):
            raise HopsetError("rho must satisfy 1/kappa <= rho <= 1/2")
        if self.mode == "reduced" and not (0 < self.eps_target < Fraction(1, 2)):
            raise HopsetError("reduced mode needs 0 < eps_target < 1/2")
        if self.mode == "direct" and not (0 < self.eps_target <= 1):
            raise HopsetError("direct mode needs 0 < eps_target <= 1")
        return self


@dataclass
class BuildPlan:
    """Derived quantities shared by every scale of one build."""

    params: HopsetParams
    n: int
    ell: int
    eps_fed: Fraction  # band stretch asked of each single-scale build
    eps_int: Fraction  # per-phase eps after rescaling by 32*(ell+1)
    eps_reduction: Fraction | None  # contraction eps (reduced mode)
    beta_single: int  # hop budget of one single-scale hopset
    effective_beta: int
    effective_eps: Fraction
    wscale: WeightScale

    def schedule_for(self, k: int, n_scale: int) -> PhaseSchedule:
        return compute_schedule(
            n_scale,
            self.params.kappa,
            self.params.rho,
            self.eps_int,
            2 ** (k + 1),
            self.params.degree_mode,
        )

    def is_trivial_scale(self, k: int) -> bool:
        """Bands with 2**(k+1) <= beta need no hopset edges.

        Distances up to beta are realized by at-most-beta-edge paths already
        (weights are >= 1), so those schedules are marked empty.  The
        comparison uses the single-scale beta in both modes; in reduced mode
        the composed budget 6*beta+5 is consumed by the star detours.
        """
        return 2 ** (k + 1) <= self.beta_single


def plan(params: HopsetParams, n: int) -> BuildPlan:
    """Fix eps rescaling and the effective (beta, eps) contract."""
    params = params.validated()
    probe = compute_schedule(
        max(n, 2), params.kappa, params.rho, Fraction(1, 100), 2, params.degree_mode
    )
    ell = probe.ell  # depends only on (kappa, rho, degree_mode)
    if params.mode == "reduced":
        eps_red = params.eps_target / 6
        eps_fed = eps_red
    else:
        eps_red = None
        eps_fed = params.eps_target
    eps_int = eps_fed / (32 * (ell + 1))
    beta_single = compute_schedule(
        max(n, 2), params.kappa, params.rho, eps_int, 2, params.degree_mode
    ).beta  # beta is independent of Rhat and n
    den = 2 * eps_int.denominator**ell
    if eps_red is not None:
        den = lcm(den, n * eps_red.denominator)
        effective_beta = 6 * beta_single + 5
    else:
        effective_beta = beta_single
    return BuildPlan(
        params=params,
        n=n,
        ell=ell,
        eps_fed=eps_fed,
        eps_int=eps_int,
        eps_reduction=eps_red,
        beta_single=beta_single,
        effective_beta=effective_beta,
        effective_eps=params.eps_target,
        wscale=WeightScale(den),
    )


@dataclass
class HopsetEdge:
    u: int
    v: int
    weight: Fraction
    scale: int
    kind: str


@dataclass
class Hopset:
    """A built hopset with its guarantee and provenance.

    Every edge weight dominates the true distance between its endpoints, so
    adding the hopset never shortens any distance; the contract is that
    (effective_beta)-limited distances in the union graph stay within
    (1 + effective_eps) of true distances.
    """

    n: int
    edges: list[HopsetEdge]
    effective_beta: int
    effective_eps: Fraction
    provenance: dict
    witnesses: list[tuple[int, ...]] | None = None
    build_stats: dict | None = None
    raw_paths: list[tuple] | None = None

    @property
    def size(self) -> int:
        return len(self.edges)

    def per_scale_sizes(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.edges:
            out[e.scale] = out.get(e.scale, 0) + 1
        return dict(sorted(out.items()))

    def star_count(self) -> int:
        return sum(1 for e in self.edges if e.kind == "star")

    def weight_scale(self) -> WeightScale:
        den = 1
        for e in self.edges:
            den = lcm(den, e.weight.denominator)
        return WeightScale(den)

    def restricted_to_scales(self, scales) -> "Hopset":
        keep = set(scales)
        idx = [i for i, e in enumerate(self.edges) if e.scale in keep]
        return Hopset(
            n=self.n,
            edges=[self.edges[i] for i in idx],
            effective_beta=self.effective_beta,
            effective_eps=self.effective_eps,
            provenance=dict(self.provenance),
            witnesses=[self.witnesses[i] for i in idx] if self.witnesses else None,
        )


def _sorted_edge_order(edges, raws):
    order = sorted(
        range(len(edges)),
        key=lambda i: (
            edges[i].scale,
            edges[i].u,
            edges[i].v,
            KIND_ORDER[edges[i].kind],
            edges[i].weight,
        ),
    )
    return [edges[i] for i in order], [raws[i] for i in order]


def build_hopset(
    graph: Graph,
    params: HopsetParams,
    lambda_hint: int | None = None,
    jobs: int = 1,
) -> Hopset:
    """Construct a hopset for `graph` per `params`.

    Reduced mode: star set plus single-scale hopsets on the contracted
    graphs of all relevant, non-trivial scales.  Direct mode: single-scale
    hopsets on the graph itself for every band up to the aspect-ratio bound
    (`lambda_hint` if given, else the sum of the n-1 largest weights).
    Unreachable regions stay unexplored, so components need no special
    casing.  Scales build independently (possibly concurrently) and merge
    in a fixed (scale, u, v) order, so results are byte-stable per seed.
    """
    problems = validate(graph)
    if problems:
        raise HopsetError(f"invalid graph: {problems[0]}")
    bp = plan(params, graph.n)
    record = params.path_reporting
    edges: list[HopsetEdge] = []
    raws: list[tuple] = []
    stats: dict = {"scales": {}}
    laminar: LaminarFamily | None = None

    if params.mode == "reduced":
        laminar = build_laminar(graph, bp.eps_reduction)
        for s in star_edges(laminar):
            edges.append(HopsetEdge(s.u, s.v, s.weight, s.scale, "star"))
            raws.append(("star", s.scale, s.u, s.v))
        ks = [k for k in relevant_scales(graph) if not bp.is_trivial_scale(k)]

        def build_scale(k: int):
            sg = materialize_scale_graph(graph, laminar, k, bp.wscale)
            if sg.active_count < 2:
                return k, sg, None
            sched = bp.schedule_for(k, sg.active_count)
            ss = build_single_scale(
                sg.adj,
                k,
                sched,
                bp.wscale,
                child_seed(params.seed, "scale", k),
                record_paths=record,
            )
            return k, sg, ss

        results = _run(build_scale, ks, jobs)
        for k, sg, ss in results:
            if ss is None:
                continue
            stats["scales"][k] = _phase_stats(ss)
            centers = sg.active_centers
            for e in ss.edges:
                cu, cv = centers[e.u], centers[e.v]
                edges.append(
                    HopsetEdge(cu, cv, bp.wscale.to_fraction(e.w), k, e.kind)
                )
                if record:
                    node_path = tuple(centers[i] for i in e.path)
                    raws.append(("gk", k, node_path))
                else:
                    raws.append(())
    else:
        lam_ub = lambda_hint
        if lam_ub is None:
            weights = sorted((w for _, _, w in graph.edges), reverse=True)
            lam_ub = sum(weights[: graph.n - 1])
        ks = []
        if lam_ub >= 2:
            k_min = max(1, bp.beta_single.bit_length() - 1)
            k_max = (lam_ub - 1).bit_length() - 1
            ks = list(range(k_min, k_max + 1))
        gadj = [
            [(v, w * bp.wscale.den) for v, w in nbrs] for nbrs in graph.adj
        ]

        def build_scale(k: int):
            sched = bp.schedule_for(k, graph.n)
            return k, build_single_scale(
                gadj,
                k,
                sched,
                bp.wscale,
                child_seed(params.seed, "scale", k),
                record_paths=record,
            )

        for k, ss in _run(build_scale, ks, jobs):
            stats["scales"][k] = _phase_stats(ss)
            for e in ss.edges:
                edges.append(HopsetEdge(e.u, e.v, bp.wscale.to_fraction(e.w), k, e.kind))
                raws.append(("g", e.path) if record else ())

    edges, raws = _sorted_edge_order(edges, raws)
    provenance = {
        "format": "hopset-provenance-1",
        "graph": graph.digest(),
        "n": str(graph.n),
        "m": str(graph.m),
        "mode": params.mode,
        "kappa": str(params.kappa),
        "rho": str(params.rho),
        "eps": str(params.eps_target),
        "degree_mode": params.degree_mode,
        "path_reporting": str(params.path_reporting).lower(),
        "seed": str(params.seed),
        "ell": str(bp.ell),
        "beta_single": str(bp.beta_single),
    }
    hs = Hopset(
        n=graph.n,
        edges=edges,
        effective_beta=bp.effective_beta,
        effective_eps=bp.effective_eps,
        provenance=provenance,
        build_stats=stats,
        raw_paths=raws if record else None,
    )
    if record:
        attach_witness_paths(graph, laminar, hs)
    return hs


def _run(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(k) for k in items]


def _phase_stats(ss) -> dict:
    return {
        "edges": len(ss.edges),
        "phases": [
            {
                "index": p.index,
                "clusters_in": p.clusters_in,
                "sampled": p.sampled,
                "unclustered": p.unclustered,
                "star_edges": p.star_edges,
                "interconnect_edges": p.interconnect_edges,
                "interconnect_visits": p.interconnect_visits,
            }
            for p in ss.stats
        ],
    }


# ---------------------------------------------------------------------------
# Witness paths


def attach_witness_paths(
    graph: Graph, laminar: LaminarFamily | None, hopset: Hopset
) -> Hopset:
    """Expand recorded construction paths into concrete graph paths.

    Direct-mode edges carry their Dijkstra tree path verbatim (weight equals
    the edge weight exactly).  Reduced-mode edges splice, per contracted-graph
    hop, the minimum original edge plus node-spanning-tree walks; star edges
    expand to tree walks.  Spliced paths weigh at most the edge weight (the
    padding terms absorb the detours), never necessarily equal.
    """
    if hopset.raw_paths is None:
        raise HopsetError("hopset was built without path recording")
    tree_cache: dict[int, dict[int, list[tuple[int, int]]]] = {}
    sg_cache: dict[int, ScaleGraph] = {}

    def tree_adj(k: int):
        if k not in tree_cache:
            if laminar is None:
                raise HopsetError("laminar family required to expand reduced witnesses")
            tree_cache[k] = laminar.tree_adjacency_at(k)
        return tree_cache[k]

    def scale_graph(k: int):
        if k not in sg_cache:
            sg_cache[k] = materialize_scale_graph(graph, laminar, k)
        return sg_cache[k]

    witnesses: list[tuple[int, ...]] = []
    for edge, raw in zip(hopset.edges, hopset.raw_paths):
        if not raw:
            raise HopsetError("edge missing recorded path")
        if raw[0] == "g":
            witnesses.append(tuple(raw[1]))
        elif raw[0] == "star":
            _, k, u, v = raw
            witnesses.append(tuple(_tree_path(tree_adj(k), u, v)))
        elif raw[0] == "gk":
            _, k, node_path = raw
            witnesses.append(
                tuple(_splice(scale_graph(k), tree_adj(k), node_path))
            )
        else:
            raise HopsetError(f"unknown recording {raw[0]!r}")
    hopset.witnesses = witnesses
    return hopset


def _tree_path(tree, a: int, b: int) -> list[int]:
    """Unique path between two vertices of one node's spanning tree (BFS)."""
    if a == b:
        return [a]
    prev = {a: None}
    queue = [a]
    while queue:
        nxt = []
        for x in queue:
            for y, _ in tree.get(x, ()):
                if y not in prev:
                    prev[y] = x
                    if y == b:
                        path = [b]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        path.reverse()
                        return path
                    nxt.append(y)
        queue = nxt
    raise HopsetError(f"vertices {a} and {b} not tree-connected")


def _splice(sg: ScaleGraph, tree, node_path: tuple[int, ...]) -> list[int]:
    """Original-graph path realizing a contracted-graph path between centers."""
    out = [node_path[0]]
    cur = node_path[0]
    for j in range(1, len(node_path)):
        a, b, _ = sg.base_edge(node_path[j - 1], node_path[j])
        out.extend(_tree_path(tree, cur, a)[1:])
        out.append(b)
        cur = b
    out.extend(_tree_path(tree, cur, node_path[-1])[1:])
    return out


def validate_witnesses(graph: Graph, hopset: Hopset) -> list[str]:
    """Check every witness is a real path u..v of weight <= the edge weight."""
    if hopset.witnesses is None:
        return ["hopset has no witnesses"]
    problems = []
    for i, (edge, path) in enumerate(zip(hopset.edges, hopset.witnesses)):
        if path[0] != edge.u or path[-1] != edge.v:
            problems.append(f"edge {i}: endpoints {path[0]},{path[-1]} != {edge.u},{edge.v}")
            continue
        total = 0
        ok = True
        for a, b in zip(path, path[1:]):
            w = graph.weight(a, b)
            if w is None:
                problems.append(f"edge {i}: ({a},{b}) is not a graph edge")
                ok = False
                break
            total += w
        if ok and Fraction(total) > edge.weight:
            problems.append(f"edge {i}: witness weight {total} > edge weight {edge.weight}")
    return problems


def lower_bound_violations(graph: Graph, hopset: Hopset, sample: int | None = None) -> list[int]:
    """Indices of edges whose weight undercuts the true distance (never allowed)."""
    if sample is not None and len(hopset.edges) > sample:
        step = max(1, len(hopset.edges) // sample)
        idx = list(range(0, len(hopset.edges), step))
    else:
        idx = list(range(len(hopset.edges)))
    bad = []
    for i in idx:
        e = hopset.edges[i]
        dist, _ = bounded_dijkstra(graph.adj, e.u, None)
        d = dist.get(e.v)
        if d is None or Fraction(d) > e.weight:
            bad.append(i)
    return bad


# ---------------------------------------------------------------------------
# Single-scale wrapper and file format


def hopset_from_single_scale(
    graph: Graph, scale_index: int, ss, wscale: WeightScale
) -> Hopset:
    """Wrap one single-scale result as a standalone hopset.

    The contract carried over is the band guarantee: hop budget 2*h_ell + 1
    with stretch slack zeta = 32*(ell+1)*eps on pairs at distance in
    (2**k, 2**(k+1)].
    """
    edges = [
        HopsetEdge(e.u, e.v, wscale.to_fraction(e.w), scale_index, e.kind)
        for e in ss.edges
    ]
    raws = [("g", e.path) if e.path else () for e in ss.edges]
    edges, raws = _sorted_edge_order(edges, raws)
    sched = ss.schedule
    return Hopset(
        n=graph.n,
        edges=edges,
        effective_beta=sched.beta,
        effective_eps=sched.zeta,
        provenance={"mode": "single-scale", "scale": str(scale_index)},
        raw_paths=raws if any(raws) else None,
    )


FILE_VERSION = 1


def dump_hopset(hopset: Hopset, out: TextIO) -> None:
    """Serialize; exact rationals as num/den, vertices 1-based.

    Output is byte-deterministic for a given hopset: provenance keys sorted,
    edges in stored (already canonical) order, witnesses by edge index.
    """
    for key in sorted(hopset.provenance):
        out.write(f"c {key} {hopset.provenance[key]}\n")
    eps = hopset.effective_eps
    out.write(
        f"h {FILE_VERSION} {hopset.n} {hopset.effective_beta} "
        f"{eps.numerator}/{eps.denominator}\n"
    )
    for e in hopset.edges:
        out.write(
            f"e {e.u + 1} {e.v + 1} {e.weight.numerator}/{e.weight.denominator} "
            f"{e.scale} {e.kind}\n"
        )
    if hopset.witnesses is not None:
        for i, path in enumerate(hopset.witnesses):
            out.write(f"p {i} {' '.join(str(v + 1) for v in path)}\n")


def load_hopset(source) -> Hopset:
    """Parse a hopset file (path or text stream); inverse of dump_hopset."""
    close = False
    if isinstance(source, (str, bytes)):
        fh = open(source, "r", encoding="ascii")
        close = True
    else:
        fh = source
    try:
        provenance: dict = {}
        header = None
        edges: list[HopsetEdge] = []
        witnesses: dict[int, tuple[int, ...]] = {}
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "c":
                if len(parts) >= 3:
                    provenance[parts[1]] = " ".join(parts[2:])
            elif parts[0] == "h":
                if header is not None:
                    raise HopsetError(f"line {lineno}: duplicate header")
                version, n, beta = int(parts[1]), int(parts[2]), int(parts[3])
                if version != FILE_VERSION:
                    raise HopsetError(f"unsupported hopset file version {version}")
                num, den = parts[4].split("/")
                header = (n, beta, Fraction(int(num), int(den)))
            elif parts[0] == "e":
                if header is None:
                    raise HopsetError(f"line {lineno}: edge before header")
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
                num, den = parts[3].split("/")
                edges.append(
                    HopsetEdge(u, v, Fraction(int(num), int(den)), int(parts[4]), parts[5])
                )
            elif parts[0] == "p":
                idx = int(parts[1])
                witnesses[idx] = tuple(int(x) - 1 for x in parts[2:])
            else:
                raise HopsetError(f"line {lineno}: unknown record {parts[0]!r}")
        if header is None:
            raise HopsetError("missing header line")
        n, beta, eps = header
        wit = None
        if witnesses:
            if sorted(witnesses) != list(range(len(edges))):
                raise HopsetError("witness lines do not cover all edges")
            wit = [witnesses[i] for i in range(len(edges))]
        return Hopset(
            n=n,
            edges=edges,
            effective_beta=beta,
            effective_eps=eps,
            provenance=provenance,
            witnesses=wit,
        )
    finally:
        if close:
            fh.close()


def params_from_provenance(provenance: dict) -> HopsetParams:
    """Reconstruct build parameters from a serialized provenance block."""
    return HopsetParams.make(
        kappa=int(provenance["kappa"]),
        rho=provenance["rho"],
        eps_target=provenance["eps"],
        seed=int(provenance["seed"]),
        mode=provenance["mode"],
        degree_mode=provenance["degree_mode"],
        path_reporting=provenance["path_reporting"] == "true",
    )
