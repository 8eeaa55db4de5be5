"""Architecture graphs: construction, named families, cuts, boundaries, and
bipartite maximum matchings.

Vertices are dense integers 0..n-1. Edges are canonicalized as (min, max)
pairs and stored sorted, so equal graphs serialize identically. All types are
immutable after construction and every operation here is a pure function.
"""

from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadParamsError,
    DisconnectedError,
    DuplicateEdgeError,
    EmptySideError,
    NotBipartiteAcrossHintError,
    SelfLoopError,
    UnknownFamilyError,
    VertexOutOfRangeError,
)

Edge = tuple[int, int]


def _canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph. Use :func:`build_graph` to construct one."""

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, compare=False, repr=False)
    degrees: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "degrees", tuple(len(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _canon(u, v) in self.edge_set

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in self.edges]})

    def to_edgelist(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def build_graph(n: int, edges: Iterable[Sequence[int]], *, strict: bool = True) -> Graph:
    """Validate and canonicalize an edge list into a Graph.

    Self-loops and out-of-range endpoints always reject. Duplicate edges
    reject when ``strict`` (the default); otherwise they are dropped with a
    warning.
    """
    if n < 1:
        raise BadParamsError(f"need at least one vertex, got n={n}")
    seen: set[Edge] = set()
    out: list[Edge] = []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRangeError(f"edge ({u},{v}) outside 0..{n - 1}")
        c = _canon(u, v)
        if c in seen:
            if strict:
                raise DuplicateEdgeError(f"duplicate edge {c}")
            warnings.warn(f"dropping duplicate edge {c}", stacklevel=2)
            continue
        seen.add(c)
        out.append(c)
    return Graph(n, tuple(sorted(out)))


def from_json(text: str) -> Graph:
    data = json.loads(text)
    return build_graph(int(data["n"]), data["edges"])


def from_edgelist(text: str) -> Graph:
    """Parse the edge-list format: first line ``n m``, then m lines ``u v``.
    Lines starting with ``#`` are comments."""
    rows = [ln.strip() for ln in text.splitlines()]
    rows = [ln for ln in rows if ln and not ln.startswith("#")]
    if not rows:
        raise BadParamsError("empty edge-list input")
    head = rows[0].split()
    n, m = int(head[0]), int(head[1])
    if len(rows) - 1 != m:
        raise BadParamsError(f"header declares {m} edges, found {len(rows) - 1}")
    edges = [tuple(int(x) for x in ln.split()[:2]) for ln in rows[1:]]
    return build_graph(n, edges)


# ---------------------------------------------------------------------------
# named families


def _path(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def _complete(n: int) -> Graph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _star(n: int) -> Graph:
    # center is vertex 0, leaves 1..n
    return build_graph(n + 1, [(0, i) for i in range(1, n + 1)])


def _barbell(n: int) -> Graph:
    # two n-cliques joined by the single edge (n-1, n);
    # left clique 0..n-1, right clique n..2n-1
    if n < 1:
        raise BadParamsError("barbell needs n >= 1")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges += [(n + i, n + j) for i in range(n) for j in range(i + 1, n)]
    edges.append((n - 1, n))
    return build_graph(2 * n, edges)


def _vertex_barbell(n: int) -> Graph:
    # two n-cliques 0..n-1 and n+1..2n joined through the center vertex n,
    # which is adjacent to all 2n clique vertices
    if n < 1:
        raise BadParamsError("vertex_barbell needs n >= 1")
    left = range(n)
    right = range(n + 1, 2 * n + 1)
    edges = [(i, j) for i in left for j in left if i < j]
    edges += [(i, j) for i in right for j in right if i < j]
    edges += [(v, n) for v in left]
    edges += [(n, v) for v in right]
    return build_graph(2 * n + 1, edges)


def _lollipop_pair(n: int) -> Graph:
    # two n-cliques 0..n-1 and n..2n-1 with hub x1 = 0 joined to every
    # right vertex and hub x2 = n joined to every left vertex
    if n < 1:
        raise BadParamsError("lollipop_pair needs n >= 1")
    edges = {(i, j) for i in range(n) for j in range(i + 1, n)}
    edges |= {(n + i, n + j) for i in range(n) for j in range(i + 1, n)}
    edges |= {_canon(0, w) for w in range(n, 2 * n)}
    edges |= {_canon(u, n) for u in range(n)}
    return build_graph(2 * n, sorted(edges))


def _grid(l1: int, l2: int) -> Graph:
    # Cartesian product of two paths; vertex (i, j) -> i*l2 + j
    if l1 < 1 or l2 < 1:
        raise BadParamsError("grid needs l1, l2 >= 1")
    edges = []
    for i in range(l1):
        for j in range(l2):
            v = i * l2 + j
            if j + 1 < l2:
                edges.append((v, v + 1))
            if i + 1 < l1:
                edges.append((v, v + l2))
    return build_graph(l1 * l2, edges)


def _gnp(n: int, p: float, seed: int) -> Graph:
    if not (0.0 <= p <= 1.0):
        raise BadParamsError(f"edge probability p={p} outside [0,1]")
    rng = np.random.default_rng(seed)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return build_graph(n, edges)


FAMILIES = {
    "path": _path,
    "complete": _complete,
    "star": _star,
    "barbell": _barbell,
    "vertex_barbell": _vertex_barbell,
    "lollipop_pair": _lollipop_pair,
    "grid": _grid,
    "gnp": _gnp,
}


def generate(family: str, **params) -> Graph:
    """Build a named graph family. Deterministic for a fixed seed."""
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise UnknownFamilyError(
            f"unknown family {family!r}; choose from {sorted(FAMILIES)}"
        ) from None
    try:
        return fn(**params)
    except TypeError as exc:
        raise BadParamsError(f"bad parameters for {family!r}: {exc}") from None


# ---------------------------------------------------------------------------
# connectivity and distances


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedError("graph is not connected")


def bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    """Exact diameter via all-pairs BFS."""
    require_connected(g)
    best = 0
    for v in range(g.n):
        best = max(best, max(bfs_distances(g, v)))
    return best


def shortest_path(g: Graph, u: int, v: int) -> list[int]:
    """One shortest u-v path as a vertex list (BFS parents)."""
    parent = {u: u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for w in g.adjacency[x]:
            if w not in parent:
                parent[w] = x
                queue.append(w)
    if v not in parent:
        raise DisconnectedError(f"no path between {u} and {v}")
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def degree_stats(g: Graph) -> tuple[int, int, Fraction, float]:
    """(min degree, max degree, degree ratio as exact Fraction, ratio as float)."""
    dmin, dmax = min(g.degrees), max(g.degrees)
    if dmin == 0:
        raise BadParamsError("degree ratio undefined with isolated vertices")
    r = Fraction(dmax, dmin)
    return dmin, dmax, r, float(r)


# ---------------------------------------------------------------------------
# cuts and boundaries


@dataclass(frozen=True)
class Cut:
    """A vertex bipartition (X, X-bar) with its derived boundary structure.

    delta_x is the set of vertices outside X with a neighbor in X, and
    delta_xbar the mirror image. boundary_edges is the edge boundary of X,
    which equals the edge boundary of X-bar. boundary_of_delta_x treats
    delta_x as a subset in its own right and collects its edge boundary.
    """

    x: frozenset[int]
    xbar: frozenset[int]
    delta_x: frozenset[int]
    delta_xbar: frozenset[int]
    boundary_edges: tuple[Edge, ...]
    boundary_of_delta_x: tuple[Edge, ...]
    boundary_of_delta_xbar: tuple[Edge, ...]


def _edge_boundary(g: Graph, subset: frozenset[int]) -> tuple[Edge, ...]:
    return tuple(
        e for e in g.edges if (e[0] in subset) != (e[1] in subset)
    )


def cut(g: Graph, x: Iterable[int]) -> Cut:
    xs = frozenset(int(v) for v in x)
    if not xs or len(xs) >= g.n:
        raise EmptySideError("cut side must be a nonempty proper subset")
    if any(v < 0 or v >= g.n for v in xs):
        raise VertexOutOfRangeError("cut contains vertices outside the graph")
    xbar = frozenset(range(g.n)) - xs
    delta_x = frozenset(
        v for v in xbar if any(u in xs for u in g.adjacency[v])
    )
    delta_xbar = frozenset(
        v for v in xs if any(u in xbar for u in g.adjacency[v])
    )
    return Cut(
        x=xs,
        xbar=xbar,
        delta_x=delta_x,
        delta_xbar=delta_xbar,
        boundary_edges=_edge_boundary(g, xs),
        boundary_of_delta_x=_edge_boundary(g, delta_x),
        boundary_of_delta_xbar=_edge_boundary(g, delta_xbar),
    )


# ---------------------------------------------------------------------------
# bipartite maximum matching


@dataclass(frozen=True)
class Matching:
    edges: tuple[Edge, ...]

    @property
    def size(self) -> int:
        return len(self.edges)


def max_matching(
    edge_set: Iterable[Sequence[int]],
    left: Iterable[int],
    right: Iterable[int],
) -> Matching:
    """Maximum-cardinality matching of an edge set that crosses a bipartition.

    Every edge boundary in this package is bipartite by construction (one end
    on each side of a cut), so augmenting paths suffice; no general matching
    is needed. Raises NotBipartiteAcrossHintError if an edge fails to cross.
    """
    ls, rs = frozenset(left), frozenset(right)
    adj: dict[int, list[int]] = {}
    edges = [_canon(*e) for e in edge_set]
    for u, v in edges:
        if u in ls and v in rs:
            a, b = u, v
        elif v in ls and u in rs:
            a, b = v, u
        else:
            raise NotBipartiteAcrossHintError(
                f"edge ({u},{v}) does not cross the given bipartition"
            )
        adj.setdefault(a, []).append(b)
    for a in adj:
        adj[a].sort()

    match_r: dict[int, int] = {}

    def try_augment(a: int, visited: set[int]) -> bool:
        for b in adj.get(a, ()):
            if b in visited:
                continue
            visited.add(b)
            if b not in match_r or try_augment(match_r[b], visited):
                match_r[b] = a
                return True
        return False

    for a in sorted(adj):
        try_augment(a, set())
    out = tuple(sorted(_canon(a, b) for b, a in match_r.items()))
    return Matching(out)


def boundary_matching(g: Graph, subset: frozenset[int]) -> Matching:
    """Maximum matching inside the edge boundary of ``subset``."""
    rest = frozenset(range(g.n)) - subset
    return max_matching(_edge_boundary(g, subset), subset, rest)
