"""Swap schedules: token semantics, verification, and deterministic routing
algorithms (odd-even on paths, two-round complete-graph routing, spanning-tree
routing, and the cut-restricted fast-partition algorithm)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    BadParamsError,
    EmptySideError,
    NotAMatchingError,
    NotAnEdgeError,
)
from .graphs import (
    Edge,
    Graph,
    _canon,
    boundary_matching,
    cut,
    require_connected,
    shortest_path,
)

# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """A bijection on 0..n-1; mapping[v] is the destination of vertex v's token."""

    mapping: tuple[int, ...]
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(n)):
            raise BadParamsError("mapping is not a bijection on 0..n-1")
        k = 1
        for cyc in self.cycles():
            k = k * len(cyc) // math.gcd(k, len(cyc))
        object.__setattr__(self, "order", k)

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for v in range(len(self.mapping)):
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            w = self.mapping[v]
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = self.mapping[w]
            out.append(tuple(cyc))
        return out

    def is_involution(self) -> bool:
        return all(self.mapping[self.mapping[v]] == v for v in range(self.n))

    def is_identity(self) -> bool:
        return all(self.mapping[v] == v for v in range(self.n))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for v, w in enumerate(self.mapping):
            inv[w] = v
        return Permutation(tuple(inv))

    def after(self, other: "Permutation") -> "Permutation":
        """Composition self(other(v)): ``other`` acts first."""
        return Permutation(tuple(self.mapping[other.mapping[v]] for v in range(self.n)))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def from_pairs(n: int, pairs: Iterable[Edge]) -> "Permutation":
        m = list(range(n))
        for u, v in pairs:
            m[u], m[v] = m[v], m[u]
        return Permutation(tuple(m))

    @staticmethod
    def random(n: int, rng) -> "Permutation":
        return Permutation(tuple(int(x) for x in rng.permutation(n)))

    @staticmethod
    def random_involution(n: int, rng) -> "Permutation":
        verts = list(rng.permutation(n))
        m = list(range(n))
        while len(verts) >= 2:
            u, v = verts.pop(), verts.pop()
            m[u], m[v] = v, u
        return Permutation(tuple(m))


def parse_permutation(text: str, n: int | None = None) -> Permutation:
    """Read a permutation from a JSON array or ``v:pi(v)`` lines."""
    stripped = text.strip()
    if stripped.startswith("["):
        return Permutation(tuple(int(x) for x in json.loads(stripped)))
    entries: dict[int, int] = {}
    for ln in stripped.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        v, w = ln.split(":")
        entries[int(v)] = int(w)
    size = n if n is not None else len(entries)
    mapping = [entries.get(v, v) for v in range(size)]
    return Permutation(tuple(mapping))


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class Schedule:
    """An ordered sequence of rounds; each round is a matching of graph edges."""

    rounds: tuple[tuple[Edge, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.rounds)

    def to_json(self) -> str:
        return json.dumps({"rounds": [[list(e) for e in r] for r in self.rounds]})

    @staticmethod
    def from_json(text: str) -> "Schedule":
        data = json.loads(text)
        return Schedule(
            tuple(tuple(_canon(*e) for e in r) for r in data["rounds"])
        )

    @staticmethod
    def from_rounds(rounds: Iterable[Iterable[Edge]]) -> "Schedule":
        cleaned = tuple(
            tuple(sorted(_canon(*e) for e in r)) for r in rounds
        )
        return Schedule(tuple(r for r in cleaned if r))


def apply_round(g: Graph, swaps: Sequence[Edge], tokens: list[int]) -> None:
    used: set[int] = set()
    for e in swaps:
        u, v = _canon(*e)
        if not g.has_edge(u, v):
            raise NotAnEdgeError(f"({u},{v}) is not an edge of the graph")
        if u in used or v in used:
            raise NotAMatchingError(f"vertex reused within a round at ({u},{v})")
        used.update((u, v))
        tokens[u], tokens[v] = tokens[v], tokens[u]


def apply_schedule(g: Graph, schedule: Schedule, tokens: Sequence[int]) -> tuple[int, ...]:
    """Run every round against a token array and return the final placement."""
    state = list(tokens)
    for swaps in schedule.rounds:
        apply_round(g, swaps, state)
    return tuple(state)


@dataclass(frozen=True)
class VerifyResult:
    valid: bool
    depth: int
    failure: str | None = None


def verify_schedule(g: Graph, pi: Permutation, schedule: Schedule) -> VerifyResult:
    """Check that the schedule routes vertex v's token to pi(v) for every v."""
    tokens = list(range(g.n))
    for i, swaps in enumerate(schedule.rounds):
        try:
            apply_round(g, swaps, tokens)
        except (NotAMatchingError, NotAnEdgeError) as exc:
            return VerifyResult(False, schedule.depth, f"round {i}: {exc}")
    for v in range(g.n):
        if tokens[pi.mapping[v]] != v:
            return VerifyResult(
                False,
                schedule.depth,
                f"token {v} ended at {tokens.index(v)}, wanted {pi.mapping[v]}",
            )
    return VerifyResult(True, schedule.depth)


# ---------------------------------------------------------------------------
# path exchange gadget
#
# Exchange the tokens at the two ends of a simple path while restoring every
# interior token. Both end tokens walk toward each other, cross on a single
# middle swap, and walk outward; the inward-moving token re-shifts exactly the
# interior tokens its partner displaced. Depth is m for odd path length m and
# m + 1 for even m.


def exchange_rounds(path: Sequence[int]) -> list[list[Edge]]:
    m = len(path) - 1
    if m < 1 or len(set(path)) != len(path):
        raise BadParamsError("exchange gadget needs a simple path of length >= 1")
    edge = lambda j: _canon(path[j - 1], path[j])  # 1-based edge index
    rounds: list[list[Edge]] = []
    a = (m - 1) // 2
    for i in range(1, a + 1):
        rounds.append([edge(i), edge(m + 1 - i)])
    if m % 2 == 1:
        rounds.append([edge(a + 1)])  # crossing swap
        for j in range(1, a + 1):
            rounds.append([edge(a + 1 + j), edge(a + 1 - j)])
    else:
        rounds.append([edge(a + 1)])
        rounds.append([edge(a + 2)])  # crossing swap
        for j in range(1, max(m - a - 2, a + 1) + 1):
            r: list[Edge] = []
            if a + 2 + j <= m:
                r.append(edge(a + 2 + j))
            if a + 2 - j >= 1:
                r.append(edge(a + 2 - j))
            rounds.append(r)
    return rounds


def merge_exchanges(paths: Sequence[Sequence[int]]) -> list[list[Edge]]:
    """Run exchange gadgets for vertex-disjoint paths in lockstep."""
    per_path = [exchange_rounds(p) for p in paths]
    depth = max((len(r) for r in per_path), default=0)
    merged: list[list[Edge]] = []
    for i in range(depth):
        swaps: list[Edge] = []
        for rounds in per_path:
            if i < len(rounds):
                swaps.extend(rounds[i])
        merged.append(swaps)
    return merged


def batch_disjoint_paths(paths: list[list[int]]) -> list[list[list[int]]]:
    """Greedily group paths into batches with pairwise-disjoint vertex sets.

    Longest paths are placed first so the deepest gadgets share rounds.
    """
    order = sorted(range(len(paths)), key=lambda i: (-len(paths[i]), i))
    batches: list[list[list[int]]] = []
    batch_verts: list[set[int]] = []
    for i in order:
        verts = set(paths[i])
        for j, used in enumerate(batch_verts):
            if not (verts & used):
                batches[j].append(paths[i])
                used |= verts
                break
        else:
            batches.append([paths[i]])
            batch_verts.append(set(verts))
    return batches


# ---------------------------------------------------------------------------
# deterministic algorithms


def route_odd_even(n: int, pi: Permutation) -> Schedule:
    """Odd-even transposition routing on the path 0-1-...-(n-1); depth <= n."""
    if pi.n != n:
        raise BadParamsError("permutation size does not match the path length")
    dest = list(pi.mapping)  # dest[i]: target position of the token at slot i
    rounds: list[list[Edge]] = []
    for r in range(n):
        start = r % 2
        swaps = []
        for i in range(start, n - 1, 2):
            if dest[i] > dest[i + 1]:
                dest[i], dest[i + 1] = dest[i + 1], dest[i]
                swaps.append((i, i + 1))
        rounds.append(swaps)
        if dest == sorted(dest):
            break
    while rounds and not rounds[-1]:
        rounds.pop()
    return Schedule.from_rounds(rounds)


def involution_decompose(pi: Permutation) -> tuple[Permutation, Permutation]:
    """Split pi into involutions (s1, s2) with pi = s2 after s1.

    Within each cycle (c_0 .. c_{k-1}), s1 reverses index i -> k-1-i and s2
    reverses i -> (k-i) mod k; both square to the identity and compose to the
    cyclic shift.
    """
    s1 = list(range(pi.n))
    s2 = list(range(pi.n))
    for cyc in pi.cycles():
        k = len(cyc)
        for i in range(k):
            s1[cyc[i]] = cyc[k - 1 - i]
            s2[cyc[i]] = cyc[(k - i) % k]
    return Permutation(tuple(s1)), Permutation(tuple(s2))


def route_complete(n: int, pi: Permutation) -> Schedule:
    """Route any permutation on the complete graph in at most two rounds,
    one per involution factor."""
    if pi.n != n:
        raise BadParamsError("permutation size mismatch")
    s1, s2 = involution_decompose(pi)
    rounds = []
    for s in (s1, s2):
        swaps = [(v, s.mapping[v]) for v in range(n) if v < s.mapping[v]]
        if swaps:
            rounds.append(swaps)
    return Schedule.from_rounds(rounds)


def _is_path_graph(g: Graph) -> list[int] | None:
    """Return the vertex order if g is a simple path, else None."""
    if g.n == 1:
        return [0]
    degs = sorted(g.degrees)
    if g.m != g.n - 1 or degs[:2] != [1, 1] or degs[-1] > 2:
        return None
    start = g.degrees.index(1)
    order = [start]
    prev = -1
    while len(order) < g.n:
        nxt = [w for w in g.adjacency[order[-1]] if w != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def bfs_spanning_tree(g: Graph, root: int = 0) -> Graph:
    require_connected(g)
    parent = {root: root}
    order = [root]
    from collections import deque

    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
                queue.append(w)
    edges = [(w, parent[w]) for w in order if w != parent[w]]
    return Graph(g.n, tuple(sorted(_canon(*e) for e in edges)))


def route_spanning_tree(g: Graph, pi: Permutation) -> Schedule:
    """Route pi on a BFS spanning tree of g.

    Path-shaped trees use odd-even transposition (depth <= n). Otherwise the
    permutation splits into two involutions and each transposition is realized
    by the path-exchange gadget, batched over vertex-disjoint tree paths.
    Depth stays within 3n across the sizes this package targets; strongly
    nested transpositions on long induced paths are the slow case.
    """
    require_connected(g)
    if pi.n != g.n:
        raise BadParamsError("permutation size mismatch")
    tree = bfs_spanning_tree(g)
    order = _is_path_graph(tree)
    if order is not None:
        # relabel onto the path, sort, map rounds back
        pos = {v: i for i, v in enumerate(order)}
        path_pi = Permutation(tuple(pos[pi.mapping[order[i]]] for i in range(g.n)))
        sched = route_odd_even(g.n, path_pi)
        rounds = [
            [(order[i], order[j]) for i, j in r] for r in sched.rounds
        ]
        return Schedule.from_rounds(rounds)
    rounds: list[list[Edge]] = []
    for sigma in involution_decompose(pi):
        paths = [
            shortest_path(tree, v, sigma.mapping[v])
            for v in range(g.n)
            if v < sigma.mapping[v]
        ]
        for batch in batch_disjoint_paths(paths):
            rounds.extend(merge_exchanges(batch))
    return Schedule.from_rounds(rounds)


# ---------------------------------------------------------------------------
# fast-partition routing (cut rounds are the only cost)


@dataclass(frozen=True)
class FastSchedule:
    """Routing transcript in the model where swaps inside each part are free.

    ``free_phases[i]`` is the intra-partition permutation applied before cut
    round i (plus one trailing cleanup phase), and ``cut_matchings[i]`` the
    parallel swaps across the boundary. Cost is cut_rounds only.
    """

    x: frozenset[int]
    cut_matchings: tuple[tuple[Edge, ...], ...]
    free_phases: tuple[tuple[int, ...], ...]

    @property
    def cut_rounds(self) -> int:
        return len(self.cut_matchings)


def apply_fast_schedule(fs: FastSchedule, n: int) -> tuple[int, ...]:
    """Replay free phases and cut rounds; returns the final token placement."""
    tokens = list(range(n))
    for i, phase in enumerate(fs.free_phases):
        # phase[v] = destination of the token currently at v
        new = list(tokens)
        for v in range(n):
            new[phase[v]] = tokens[v]
        tokens = new
        if i < len(fs.cut_matchings):
            for u, v in fs.cut_matchings[i]:
                tokens[u], tokens[v] = tokens[v], tokens[u]
    return tuple(tokens)


def route_fast_partition(g: Graph, x: Iterable[int], pi: Permutation) -> FastSchedule:
    """Cut-optimal routing for a partition X: ceil(k / |M|) boundary rounds,
    where k counts tokens that must leave X and M is a maximum matching in the
    edge boundary. Free phases permute within X and its complement at no cost.
    """
    require_connected(g)
    c = cut(g, x)
    if len(c.x) > g.n // 2:
        raise EmptySideError("fast partition expects |X| <= n/2")
    matching = boundary_matching(g, c.x)
    if matching.size == 0:
        raise EmptySideError("edge boundary is empty")

    tokens = list(range(g.n))  # tokens[v] = token sitting at v
    dest = pi.mapping
    free_phases: list[tuple[int, ...]] = []
    cut_rounds: list[tuple[Edge, ...]] = []

    while True:
        # marked vertices still on the wrong side, in ascending vertex order
        need_out_x = sorted(v for v in c.x if dest[tokens[v]] not in c.x)
        need_out_xbar = sorted(v for v in c.xbar if dest[tokens[v]] in c.x)
        if not need_out_x:
            break
        use = matching.edges[: min(matching.size, len(need_out_x))]
        # free phase: bring the next marked tokens onto the matched endpoints
        phase = list(range(g.n))
        sources = {}
        for (mx, mxbar), out_v, in_v in zip(use, need_out_x, need_out_xbar):
            a, b = (mx, mxbar) if mx in c.x else (mxbar, mx)
            sources[a] = out_v
            sources[b] = in_v
        _fill_phase(phase, sources, c.x)
        _fill_phase(phase, sources, c.xbar)
        new = list(tokens)
        for v in range(g.n):
            new[phase[v]] = tokens[v]
        tokens = new
        free_phases.append(tuple(phase))
        swaps = tuple(_canon(*e) for e in use)
        for u, v in swaps:
            tokens[u], tokens[v] = tokens[v], tokens[u]
        cut_rounds.append(swaps)

    # final free phase: everything is on its home side; finish within parts
    phase = [dest[tokens[v]] for v in range(g.n)]
    free_phases.append(tuple(phase))
    return FastSchedule(
        x=c.x,
        cut_matchings=tuple(cut_rounds),
        free_phases=tuple(free_phases),
    )


def _fill_phase(phase: list[int], sources: dict[int, int], side: frozenset[int]) -> None:
    """Complete a partial intra-side permutation sending sources[t] -> t."""
    side_list = sorted(side)
    assigned_to = {t: s for t, s in sources.items() if t in side}
    used_sources = set(assigned_to.values())
    free_targets = [v for v in side_list if v not in assigned_to]
    free_sources = [v for v in side_list if v not in used_sources]
    for s, t in zip(free_sources, free_targets):
        assigned_to[t] = s
    for t, s in assigned_to.items():
        phase[s] = t
