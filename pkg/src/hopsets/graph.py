"""Graph data model, validation, DIMACS I/O and synthetic generators.

Vertices are 0-based and contiguous internally; all text formats (DIMACS
.gr and everything the CLI prints) are 1-based.  Weights are positive
integers, the minimal distance in any graph being 1.  Graphs are undirected
and simple: ingest collapses duplicate arcs to the minimum weight and merges
(u,v)/(v,u) pairs.
"""

from __future__ import annotations

import hashlib
import math
import random
from typing import Iterable, TextIO


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    """Parse failure; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Graph:
    """Immutable-by-convention weighted undirected graph.

    `edges` is a sorted list of (u, v, w) with u < v; `adj` holds, per
    vertex, a list of (neighbor, weight) pairs consistent with `edges`.
    """

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: list[tuple[int, int, int]]):
        self.n = n
        self.edges = edges
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for u, v, w in edges:
            self.adj[u].append((v, w))
            self.adj[v].append((u, w))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "Graph":
        """Build a validated graph, deduplicating parallel edges (keep min)."""
        if n < 1:
            raise GraphError("vertex count must be >= 1")
        best: dict[tuple[int, int], int] = {}
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"vertex id out of range: ({u}, {v})")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not isinstance(w, int) or w < 1:
                raise GraphError(f"edge ({u}, {v}) has non-positive-integer weight {w}")
            key = (u, v) if u < v else (v, u)
            prev = best.get(key)
            if prev is None or w < prev:
                best[key] = w
        edge_list = sorted((u, v, w) for (u, v), w in best.items())
        return cls(n, edge_list)

    def weight(self, u: int, v: int) -> int | None:
        for x, w in self.adj[u]:
            if x == v:
                return w
        return None

    @property
    def m(self) -> int:
        return len(self.edges)

    def max_weight(self) -> int:
        return max((w for _, _, w in self.edges), default=0)

    def digest(self) -> str:
        """Content hash over (n, canonical edge list)."""
        h = hashlib.sha256()
        h.update(f"gr {self.n}\n".encode())
        for u, v, w in self.edges:
            h.update(f"{u} {v} {w}\n".encode())
        return h.hexdigest()[:16]

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def validate(graph: Graph) -> list[str]:
    """Check all graph invariants; returns violations (empty means valid)."""
    violations = []
    seen = set()
    for u, v, w in graph.edges:
        if not (0 <= u < graph.n and 0 <= v < graph.n):
            violations.append(f"vertex-range: edge ({u},{v}) outside [0,{graph.n})")
            continue
        if u == v:
            violations.append(f"self-loop: vertex {u}")
        if not isinstance(w, int) or w < 1:
            violations.append(f"weight-positivity: edge ({u},{v}) has weight {w}")
        key = (min(u, v), max(u, v))
        if key in seen:
            violations.append(f"duplicate-edge: pair {key}")
        seen.add(key)
    # adjacency must mirror the edge list exactly
    mirror: list[list[tuple[int, int]]] = [[] for _ in range(graph.n)]
    for u, v, w in graph.edges:
        if 0 <= u < graph.n and 0 <= v < graph.n:
            mirror[u].append((v, w))
            mirror[v].append((u, w))
    for v in range(graph.n):
        if sorted(mirror[v]) != sorted(graph.adj[v]):
            violations.append(f"adjacency-consistency: vertex {v}")
    return violations


# ---------------------------------------------------------------------------
# DIMACS shortest-path format (.gr): `c` comments, `p sp n m`, `a u v w`.


def load_dimacs(source) -> Graph:
    """Parse a DIMACS .gr file (path, text stream, or byte stream).

    Duplicate arcs and (u,v)/(v,u) pairs collapse to the minimum weight.
    Raises GraphFormatError with a line number on malformed input.
    """
    close = False
    if isinstance(source, (str, bytes)):
        fh = open(source, "r", encoding="ascii")
        close = True
    else:
        fh = source
    try:
        n = None
        raw_edges: list[tuple[int, int, int]] = []
        for lineno, raw in enumerate(fh, start=1):
            if isinstance(raw, bytes):
                raw = raw.decode("ascii")
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            if parts[0] == "p":
                if n is not None:
                    raise GraphFormatError("duplicate problem line", lineno)
                if len(parts) != 4 or parts[1] != "sp":
                    raise GraphFormatError(f"malformed problem line {line!r}", lineno)
                try:
                    n = int(parts[2])
                    int(parts[3])
                except ValueError:
                    raise GraphFormatError(f"malformed problem line {line!r}", lineno)
                if n < 1:
                    raise GraphFormatError(f"vertex count {n} < 1", lineno)
            elif parts[0] == "a":
                if n is None:
                    raise GraphFormatError("arc before problem line", lineno)
                if len(parts) != 4:
                    raise GraphFormatError(f"malformed arc line {line!r}", lineno)
                try:
                    u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
                except ValueError:
                    raise GraphFormatError(f"malformed arc line {line!r}", lineno)
                if not (1 <= u <= n and 1 <= v <= n):
                    raise GraphFormatError(
                        f"vertex id out of range [1,{n}] in {line!r}", lineno
                    )
                if w < 1:
                    raise GraphFormatError(f"weight {w} < 1", lineno)
                if u == v:
                    raise GraphFormatError(f"self-loop at vertex {u}", lineno)
                raw_edges.append((u - 1, v - 1, w))
            else:
                raise GraphFormatError(f"unknown record {parts[0]!r}", lineno)
        if n is None:
            raise GraphFormatError("missing problem line", None)
        return Graph.from_edges(n, raw_edges)
    finally:
        if close:
            fh.close()


def dump_dimacs(graph: Graph, out: TextIO, comments: dict | None = None) -> None:
    """Write a graph as DIMACS .gr; one `a` line per edge with u < v."""
    if comments:
        for key in sorted(comments):
            out.write(f"c {key} {comments[key]}\n")
    out.write(f"p sp {graph.n} {graph.m}\n")
    for u, v, w in graph.edges:
        out.write(f"a {u + 1} {v + 1} {w}\n")


# ---------------------------------------------------------------------------
# Generators.  All are pure functions of (model parameters, seed).


def er_graph(n: int, p: float, wmin: int, wmax: int, seed: int) -> Graph:
    """Erdős–Rényi G(n, p) with uniform integer weights in [wmin, wmax]."""
    if n < 2:
        raise GraphError("er: n must be >= 2")
    if not (0 < p <= 1):
        raise GraphError("er: p must be in (0, 1]")
    if not (1 <= wmin <= wmax):
        raise GraphError("er: need 1 <= wmin <= wmax")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, rng.randint(wmin, wmax)))
    return Graph.from_edges(n, edges)


def path_graph(n: int, base: float, seed: int = 0) -> Graph:
    """Path on n vertices; edge i gets weight floor(base**i), clamped to >= 1.

    A base > 1 produces geometrically growing weights, the large-aspect-ratio
    regime the scale reduction is built for.  Deterministic; seed unused.
    """
    if n < 2:
        raise GraphError("path: n must be >= 2")
    if base < 1:
        raise GraphError("path: base must be >= 1")
    edges = []
    for i in range(n - 1):
        if float(base).is_integer():
            w = int(base) ** i
        else:
            w = math.floor(base**i)
        edges.append((i, i + 1, max(1, w)))
    return Graph.from_edges(n, edges)


def grid_graph(rows: int, cols: int, wmin: int, wmax: int, seed: int) -> Graph:
    """rows x cols grid with 4-neighbor edges and uniform integer weights."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise GraphError("grid: need at least 2 vertices")
    if not (1 <= wmin <= wmax):
        raise GraphError("grid: need 1 <= wmin <= wmax")
    rng = random.Random(seed)
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, rng.randint(wmin, wmax)))
            if r + 1 < rows:
                edges.append((v, v + cols, rng.randint(wmin, wmax)))
    return Graph.from_edges(rows * cols, edges)


def generate(model: str, seed: int = 0, **params) -> Graph:
    """Dispatch on model name: er(n,p,wmin,wmax), path(n,base), grid(rows,cols,wmin,wmax)."""
    if model == "er":
        return er_graph(
            params["n"], params["p"], params.get("wmin", 1), params.get("wmax", 1), seed
        )
    if model == "path":
        return path_graph(params["n"], params.get("base", 1), seed)
    if model == "grid":
        return grid_graph(
            params["rows"],
            params["cols"],
            params.get("wmin", 1),
            params.get("wmax", 1),
            seed,
        )
    raise GraphError(f"unknown model {model!r}")
