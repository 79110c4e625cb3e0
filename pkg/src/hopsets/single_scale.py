"""Single-scale hopset construction.

One build covers a distance band (2**k, 2**(k+1)] of its input graph.  It
runs ell phases of {supercluster, interconnect} plus a concluding phase of
interconnection only.  Superclustering samples clusters, explores from the
sampled centers to distance delta_i, and absorbs every unsampled cluster
whose center was reached, adding one exact-distance star edge per
absorption.  Interconnection links every pair of surviving cluster centers
within delta_i / 2, again at exact distance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .explore import bounded_dijkstra, multi_source_bounded_dijkstra
from .util import as_fraction, child_seed, floor_log2
from .weights import WeightScale


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class PhaseSchedule:
    """All derived per-scale parameters.

    Thresholds are exact rationals: delta[i] is the superclustering
    exploration depth of phase i (interconnection uses delta[i]/2), radius[i]
    bounds cluster radii entering phase i, h[i] the hop counts of the
    stretch recurrence, and beta = 2*h[ell] + 1 the hop budget the band
    guarantee is stated for.  deg[i] drives sampling: probability 1/deg[i],
    used directly without rounding.
    """

    n: int
    kappa: int
    rho: Fraction
    eps: Fraction
    Rhat: int
    degree_mode: str
    i0: int
    i1: int
    ell: int
    alpha: Fraction
    delta: tuple[Fraction, ...]
    radius: tuple[Fraction, ...]
    deg: tuple[float, ...]
    h: tuple[Fraction, ...]
    beta: int

    def sample_probability(self, i: int) -> float:
        return min(1.0, 1.0 / self.deg[i])

    @property
    def zeta(self) -> Fraction:
        """Stretch slack guaranteed on the band at hop budget beta (c = 2)."""
        return 32 * (self.ell + 1) * self.eps


def compute_schedule(
    n: int,
    kappa: int,
    rho,
    eps,
    Rhat: int,
    degree_mode: str = "basic",
) -> PhaseSchedule:
    """Evaluate the phase-count, threshold, degree and hop recurrences.

    Stage 1 covers phases 0..i0 with exponentially growing deg, stage 2
    phases i0+1..i1 with flat deg; phase ell = i1 + 1 is interconnect-only.
    The refined degree mode divides stage-1 degrees by 2**(2**i - 1) and adds
    one phase, trimming the hopset size at the cost of a larger beta.
    """
    rho = as_fraction(rho)
    eps = as_fraction(eps)
    if n < 2:
        raise ScheduleError("schedule needs n >= 2")
    if kappa < 2:
        raise ScheduleError("kappa must be an integer >= 2")
    if degree_mode not in ("basic", "refined"):
        raise ScheduleError(f"unknown degree_mode {degree_mode!r}")
    if Rhat < 1:
        raise ScheduleError("Rhat must be >= 1")
    if kappa * rho < 1:
        raise ScheduleError(
            f"kappa*rho = {kappa * rho} < 1: the first-stage phase count "
            "floor(log2(kappa*rho)) would be negative; choose rho >= 1/kappa"
        )
    if rho > Fraction(1, 2):
        raise ScheduleError("rho must satisfy 1/kappa <= rho <= 1/2")
    if not (0 < eps <= Fraction(1, 10)):
        raise ScheduleError(
            f"internal eps {eps} outside (0, 1/10]: the hop recurrence bound "
            "h_i <= 3*(1/eps+2)**i needs a small eps"
        )

    i0 = floor_log2(kappa * rho)
    steps = math.ceil(Fraction(kappa + 1) / (kappa * rho))
    if degree_mode == "basic":
        i1 = i0 + steps - 2
    else:
        i1 = i0 + steps - 1
    ell = i1 + 1

    nf = float(n)
    deg: list[float] = []
    for i in range(i1 + 1):
        if degree_mode == "basic":
            deg.append(nf ** (2**i / kappa) if i <= i0 else nf ** float(rho))
        else:
            if i <= i0:
                deg.append(nf ** (2**i / kappa) / 2 ** (2**i - 1))
            elif i == i0 + 1:
                deg.append(nf ** (float(rho) / 2))
            else:
                deg.append(nf ** float(rho))

    alpha = eps**ell * Rhat
    inv = 1 / eps
    radius = [Fraction(0)]
    delta = []
    for i in range(ell + 1):
        d = alpha * inv**i + 4 * radius[i]
        delta.append(d)
        radius.append(d + radius[i])
    radius = radius[: ell + 1]

    h = [Fraction(1)]
    for i in range(ell):
        h.append((h[i] + 1) * (inv + 2) + 2 * i + 5)
    beta = int(2 * h[ell] + 1)

    return PhaseSchedule(
        n=n,
        kappa=kappa,
        rho=rho,
        eps=eps,
        Rhat=Rhat,
        degree_mode=degree_mode,
        i0=i0,
        i1=i1,
        ell=ell,
        alpha=alpha,
        delta=tuple(delta),
        radius=tuple(radius),
        deg=tuple(deg),
        h=tuple(h),
        beta=beta,
    )


# ---------------------------------------------------------------------------
# Build state


@dataclass
class Cluster:
    center: int
    members: tuple[int, ...]


@dataclass
class ClusterPartition:
    phase: int
    clusters: list[Cluster]

    def centers(self) -> list[int]:
        return [c.center for c in self.clusters]


@dataclass
class ScaleEdge:
    """A hopset edge in the coordinates of the graph the build ran on.

    `w` is a scaled integer (exact distance measured by the construction's
    Dijkstra); `path` is the realizing vertex path u..v when recording.
    """

    u: int
    v: int
    w: int
    kind: str  # "supercluster" | "interconnect"
    path: tuple[int, ...] | None = None


@dataclass
class PhaseStats:
    index: int
    clusters_in: int
    sampled: int
    absorbed: int
    unclustered: int
    star_edges: int
    interconnect_edges: int
    interconnect_visits: int


@dataclass
class SingleScaleHopset:
    scale: int
    edges: list[ScaleEdge]
    schedule: PhaseSchedule
    stats: list[PhaseStats] = field(default_factory=list)
    partitions: list[list[Cluster]] = field(default_factory=list)


def supercluster_phase(
    adj,
    partition: ClusterPartition,
    i: int,
    schedule: PhaseSchedule,
    scale: WeightScale,
    rng: random.Random,
    sample_probability: float | None = None,
) -> tuple[ClusterPartition, list[ScaleEdge], list[Cluster], int]:
    """One superclustering step; returns (next partition, star edges, U_i, #sampled).

    Sampling consumes randomness in ascending center-id order so the outcome
    is independent of container iteration order.  Every unsampled cluster
    whose center the bounded exploration reached joins the supercluster of
    its forest root and contributes one star edge at exact distance.
    """
    p = schedule.sample_probability(i) if sample_probability is None else sample_probability
    clusters = sorted(partition.clusters, key=lambda c: c.center)
    sampled: list[Cluster] = []
    rest: list[Cluster] = []
    for c in clusters:
        (sampled if rng.random() < p else rest).append(c)

    if not sampled:
        return ClusterPartition(i + 1, []), [], rest, 0

    depth = scale.to_scaled(schedule.delta[i])
    forest = multi_source_bounded_dijkstra(adj, [c.center for c in sampled], depth)

    star: list[ScaleEdge] = []
    absorbed: dict[int, list[Cluster]] = {c.center: [] for c in sampled}
    unclustered: list[Cluster] = []
    for c in rest:
        d = forest.dist.get(c.center)
        if d is None:
            unclustered.append(c)
            continue
        r = forest.root[c.center]
        absorbed[r].append(c)
        star.append(
            ScaleEdge(
                u=r,
                v=c.center,
                w=d,
                kind="supercluster",
                path=tuple(forest.path_from_root(c.center)),
            )
        )

    nxt = []
    for c in sampled:
        members = list(c.members)
        for joined in absorbed[c.center]:
            members.extend(joined.members)
        nxt.append(Cluster(c.center, tuple(members)))
    return ClusterPartition(i + 1, nxt), star, unclustered, len(sampled)


def interconnect_phase(
    adj,
    unclustered: list[Cluster],
    i: int,
    schedule: PhaseSchedule,
    scale: WeightScale,
    visit_counter: list[int] | None = None,
) -> list[ScaleEdge]:
    """Link every pair of unclustered centers within delta_i / 2 (inclusive).

    Each center runs its own bounded exploration; a pair is emitted once,
    from its lower-id endpoint (distance symmetry makes both sides agree).
    """
    half = scale.to_scaled(schedule.delta[i] / 2)
    centers = sorted(c.center for c in unclustered)
    center_set = set(centers)
    edges: list[ScaleEdge] = []
    for c in centers:
        dist, parent = bounded_dijkstra(adj, c, half, visit_counter)
        for v, d in sorted(dist.items()):
            if v in center_set and v > c:
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                edges.append(ScaleEdge(u=c, v=v, w=d, kind="interconnect", path=tuple(path)))
    return edges


def build_single_scale(
    adj,
    scale_index: int,
    schedule: PhaseSchedule,
    scale: WeightScale,
    seed: int,
    record_paths: bool = False,
    sample_overrides: dict[int, float] | None = None,
    keep_partitions: bool = False,
) -> SingleScaleHopset:
    """Run all phases over `adj` (any graph in scaled-integer weights).

    Deterministic for fixed (adj, schedule, seed).  `sample_overrides` maps a
    phase index to a forced sampling probability (test hook).  Vertices of
    `adj` start as singleton clusters; emitted edges live in the same vertex
    space as `adj`.
    """
    nv = len(adj)
    partition = ClusterPartition(0, [Cluster(v, (v,)) for v in range(nv)])
    edges: list[ScaleEdge] = []
    stats: list[PhaseStats] = []
    partitions: list[list[Cluster]] = []
    for i in range(schedule.ell + 1):
        if keep_partitions:
            partitions.append(list(partition.clusters))
        concluding = i == schedule.ell
        clusters_in = len(partition.clusters)
        if concluding:
            unclustered = partition.clusters
            nxt = ClusterPartition(i + 1, [])
            star: list[ScaleEdge] = []
            n_sampled = 0
        else:
            override = (sample_overrides or {}).get(i)
            rng = random.Random(child_seed(seed, "phase", i))
            nxt, star, unclustered, n_sampled = supercluster_phase(
                adj, partition, i, schedule, scale, rng, override
            )
        visits = [0] * nv
        inter = interconnect_phase(adj, unclustered, i, schedule, scale, visits)
        stats.append(
            PhaseStats(
                index=i,
                clusters_in=clusters_in,
                sampled=n_sampled,
                absorbed=clusters_in - n_sampled - len(unclustered),
                unclustered=len(unclustered),
                star_edges=len(star),
                interconnect_edges=len(inter),
                interconnect_visits=sum(visits),
            )
        )
        edges.extend(star)
        edges.extend(inter)
        partition = nxt
    if not record_paths:
        for e in edges:
            e.path = None
    return SingleScaleHopset(scale_index, edges, schedule, stats, partitions)
