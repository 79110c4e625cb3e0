"""Oracle-based verification of the (beta, eps) contract plus size accounting.

The stretch check is exact end to end: true distances come from per-source
Dijkstra, limited distances from two-buffer hop-limited Bellman-Ford over
the union graph, and the comparison runs in scaled integers.  There is no
tolerance; a violation is either a bug or a genuinely failed probabilistic
event (the report carries the seed material to replay it).  Size and load
bounds exceeded are reported as outliers, not contract violations.
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .explore import dijkstra_all, hop_limited_bellman_ford
from .graph import Graph
from .hopset import Hopset, HopsetError


@dataclass
class VerificationReport:
    n: int
    pair_mode: str
    effective_beta: int
    effective_eps: Fraction
    pairs_checked: int
    max_stretch: Fraction | None
    violations: list[dict]
    per_scale_sizes: dict[int, int]
    star_edges: int
    hopset_edges: int
    violation_total: int = 0
    exploration_load: dict | None = None
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.violation_total == 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pair_mode": self.pair_mode,
            "effective_beta": self.effective_beta,
            "effective_eps": _frac(self.effective_eps),
            "pairs_checked": self.pairs_checked,
            "max_stretch": _frac(self.max_stretch),
            "max_stretch_float": (
                float(self.max_stretch) if self.max_stretch is not None else None
            ),
            "violations": self.violations,
            "violation_count": self.violation_total,
            "hopset_edges": self.hopset_edges,
            "star_edges": self.star_edges,
            "per_scale_sizes": {str(k): v for k, v in self.per_scale_sizes.items()},
            "exploration_load": self.exploration_load,
            "wall_time": round(self.wall_time, 6),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _frac(f: Fraction | None) -> str | None:
    if f is None:
        return None
    return f"{f.numerator}/{f.denominator}"


def exact_apsp(graph: Graph, n_max: int = 500) -> list[list[int | None]]:
    """All-pairs exact distances by n Dijkstra sweeps (None = unreachable)."""
    if graph.n > n_max:
        raise HopsetError(f"graph too large for all-pairs oracle (n={graph.n} > {n_max})")
    return [dijkstra_all(graph.adj, s) for s in range(graph.n)]


def _union_edges(graph: Graph, hopset: Hopset, den: int):
    rel = [(u, v, w * den, ("g", i)) for i, (u, v, w) in enumerate(graph.edges)]
    for i, e in enumerate(hopset.edges):
        w = e.weight.numerator * den // e.weight.denominator
        rel.append((e.u, e.v, w, ("h", i)))
    return rel


def verify_stretch(
    graph: Graph,
    hopset: Hopset,
    pair_mode: str = "all",
    sample_size: int = 1000,
    sample_seed: int = 0,
    band: int | None = None,
    n_max_allpairs: int = 500,
    max_violations: int = 100,
    jobs: int = 1,
) -> VerificationReport:
    """Check hop-limited stretch of the union graph against exact distances.

    pair_mode "all": every unordered pair with finite distance (n capped by
    n_max_allpairs); "band": pairs with distance in (2**band, 2**(band+1)];
    "sample": sample_size ordered pairs drawn uniformly over finite-distance
    pairs, deterministically per sample_seed.  A pair violates if its
    beta-limited distance is infinite or exceeds (1 + eps) times the true
    distance; unreachable pairs are excluded.
    """
    if hopset.n != graph.n:
        raise HopsetError(f"hopset is for n={hopset.n}, graph has n={graph.n}")
    t0 = time.perf_counter()
    den = hopset.weight_scale().den
    rel = _union_edges(graph, hopset, den)
    eps = hopset.effective_eps
    beta = hopset.effective_beta
    n = graph.n

    if pair_mode in ("all", "band"):
        if n > n_max_allpairs:
            raise HopsetError(
                f"pair mode {pair_mode!r} limited to n <= {n_max_allpairs}"
            )
        if pair_mode == "band" and band is None:
            raise HopsetError("band mode needs a scale index")
        wanted = {s: None for s in range(n)}  # all targets above s
        mode_desc = pair_mode if band is None else f"band({band})"
    elif pair_mode == "sample":
        pairs = _sample_pairs(graph, sample_size, sample_seed)
        wanted = {}
        for s, v in pairs:
            wanted.setdefault(s, []).append(v)
        mode_desc = f"sample({sample_size},{sample_seed})"
    else:
        raise HopsetError(f"unknown pair mode {pair_mode!r}")

    lo = hi = None
    if pair_mode == "band":
        lo, hi = 2**band, 2 ** (band + 1)

    def check_source(s: int):
        d_true = dijkstra_all(graph.adj, s)
        table = hop_limited_bellman_ford(n, rel, [s], beta)
        lim = table.dist[s]
        targets = wanted[s] if wanted[s] is not None else range(s + 1, n)
        out_max: Fraction | None = None
        out_violations = []
        checked = 0
        for v in targets:
            dg = d_true[v]
            if v == s or dg is None:
                continue
            if lo is not None and not (lo < dg <= hi):
                continue
            checked += 1
            dl = lim[v]
            if dl is None:
                out_violations.append((s, v, dg, None, None))
                continue
            stretch = Fraction(dl, dg * den)
            if out_max is None or stretch > out_max:
                out_max = stretch
            # both sides of the contract: no undercut below the true
            # distance, no overshoot beyond (1 + eps) times it
            if dl < dg * den or dl * eps.denominator > dg * den * (
                eps.numerator + eps.denominator
            ):
                out_violations.append((s, v, dg, dl, stretch))
        return checked, out_max, out_violations

    sources = sorted(wanted)
    if jobs > 1 and len(sources) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check_source, sources))
    else:
        results = [check_source(s) for s in sources]

    pairs_checked = 0
    max_stretch: Fraction | None = None
    violations: list[dict] = []
    total_violations = 0
    for checked, smax, viol in results:
        pairs_checked += checked
        if smax is not None and (max_stretch is None or smax > max_stretch):
            max_stretch = smax
        total_violations += len(viol)
        for s, v, dg, dl, stretch in viol[: max(0, max_violations - len(violations))]:
            violations.append(
                {
                    "u": s,
                    "v": v,
                    "d_true": dg,
                    "d_limited": _frac(Fraction(dl, den)) if dl is not None else None,
                    "stretch": _frac(stretch),
                }
            )
    load = None
    if hopset.build_stats:
        load = _load_summary(hopset.build_stats, n)
    return VerificationReport(
        n=n,
        pair_mode=mode_desc,
        effective_beta=beta,
        effective_eps=eps,
        pairs_checked=pairs_checked,
        max_stretch=max_stretch,
        violations=violations,
        violation_total=total_violations,
        per_scale_sizes=hopset.per_scale_sizes(),
        star_edges=hopset.star_count(),
        hopset_edges=hopset.size,
        exploration_load=load,
        wall_time=time.perf_counter() - t0,
    )


def _sample_pairs(graph: Graph, m: int, seed: int) -> list[tuple[int, int]]:
    """Uniform over ordered pairs with finite distance: pairs sharing a component."""
    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in graph.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    comps: dict[int, list[int]] = {}
    for v in range(graph.n):
        comps.setdefault(find(v), []).append(v)
    weighted = [vs for vs in comps.values() if len(vs) > 1]
    total = sum(len(vs) * (len(vs) - 1) for vs in weighted)
    if total == 0:
        return []
    rng = random.Random(seed)
    pairs = []
    for _ in range(m):
        r = rng.randrange(total)
        for vs in weighted:
            block = len(vs) * (len(vs) - 1)
            if r < block:
                i, j = divmod(r, len(vs) - 1)
                u = vs[i]
                v = vs[j if j < i else j + 1]
                pairs.append((u, v))
                break
            r -= block
    return pairs


def _load_summary(stats: dict, n: int) -> dict:
    scales = {}
    for k, s in stats.get("scales", {}).items():
        scales[str(k)] = [
            {
                "phase": p["index"],
                "mean_visits": round(p["interconnect_visits"] / max(1, n), 4),
                "interconnect_edges": p["interconnect_edges"],
            }
            for p in s["phases"]
        ]
    return scales


def size_stats(hopset: Hopset, n: int, kappa: int) -> dict:
    """Pure accounting: per-scale counts and the normalized size ratio."""
    total = hopset.size
    stars = hopset.star_count()
    norm = n ** (1 + 1 / kappa) * math.log(n) if n > 1 else 1.0
    s_bound = n * math.log2(n) if n > 1 else 0.0
    return {
        "total_edges": total,
        "per_scale": hopset.per_scale_sizes(),
        "star_edges": stars,
        "star_bound": s_bound,
        "star_within_bound": stars <= s_bound + 1e-9,
        "normalized_ratio": total / norm,
        "effective_beta": hopset.effective_beta,
        "effective_eps": _frac(hopset.effective_eps),
    }
