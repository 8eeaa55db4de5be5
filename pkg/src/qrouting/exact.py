"""Ground-truth routing numbers by breadth-first search over token
configurations. States pack into machine integers (3 bits per vertex at the
default limit of 8 vertices) so visited-set churn stays cheap."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations as iter_permutations

from .errors import TooLargeError
from .graphs import Edge, Graph, require_connected
from .routing import Permutation, Schedule

DEFAULT_PI_LIMIT = 8
DEFAULT_WORST_LIMIT = 7

_BITS = 4  # per-vertex field width; supports n <= 16 packings


def _pack(tokens: tuple[int, ...]) -> int:
    code = 0
    for t in reversed(tokens):
        code = (code << _BITS) | t
    return code


def _unpack(code: int, n: int) -> tuple[int, ...]:
    mask = (1 << _BITS) - 1
    out = []
    for _ in range(n):
        out.append(code & mask)
        code >>= _BITS
    return tuple(out)


def enumerate_matchings(g: Graph, max_edges: int = 32) -> list[tuple[Edge, ...]]:
    """All nonempty matchings of g, deduplicated, in a deterministic order."""
    if g.m > max_edges:
        raise TooLargeError(f"{g.m} edges exceeds the limit {max_edges}")
    edges = list(g.edges)
    out: list[tuple[Edge, ...]] = []

    def extend(start: int, chosen: list[Edge], used: set[int]) -> None:
        for i in range(start, len(edges)):
            u, v = edges[i]
            if u in used or v in used:
                continue
            chosen.append(edges[i])
            out.append(tuple(chosen))
            extend(i + 1, chosen, used | {u, v})
            chosen.pop()

    extend(0, [], set())
    return out


def maximal_matchings(g: Graph) -> list[tuple[Edge, ...]]:
    """Matchings that cannot be extended by any edge of g.

    Kept for experimentation only: restricting BFS branching to maximal
    matchings is unsound (on the 4-clique every maximal matching is an even
    permutation, so odd targets become unreachable), which the test suite
    demonstrates.
    """
    out = []
    for m in enumerate_matchings(g):
        used = {v for e in m for v in e}
        if all(u in used or v in used for u, v in g.edges):
            out.append(m)
    return out


@dataclass(frozen=True)
class SearchResult:
    depth: int
    witness_schedule: Schedule
    explored: int


@dataclass(frozen=True)
class WorstCase:
    depth: int
    worst_pi: Permutation
    explored: int


def _branching(g: Graph, branching: str) -> list[tuple[Edge, ...]]:
    if branching == "all":
        return enumerate_matchings(g)
    if branching == "maximal":
        return maximal_matchings(g)
    raise ValueError(f"unknown branching {branching!r}")


def exact_rt_pi(
    g: Graph,
    pi: Permutation,
    *,
    limit: int = DEFAULT_PI_LIMIT,
    branching: str = "all",
) -> SearchResult:
    """Exact minimum number of swap rounds realizing pi, with one optimal
    schedule as a witness."""
    require_connected(g)
    if g.n > limit:
        raise TooLargeError(f"n={g.n} exceeds the search limit {limit}")
    if pi.n != g.n:
        raise ValueError("permutation size mismatch")
    # goal state: token v sits at pi(v), i.e. tokens[pi(v)] = v
    goal = [0] * g.n
    for v in range(g.n):
        goal[pi.mapping[v]] = v
    goal_code = _pack(tuple(goal))
    start = _pack(tuple(range(g.n)))
    if goal_code == start:
        return SearchResult(0, Schedule(()), 1)

    moves = _branching(g, branching)
    parent: dict[int, tuple[int, int]] = {start: (-1, -1)}
    frontier = deque([start])
    while frontier:
        code = frontier.popleft()
        tokens = _unpack(code, g.n)
        for mi, matching in enumerate(moves):
            new = list(tokens)
            for u, v in matching:
                new[u], new[v] = new[v], new[u]
            ncode = _pack(tuple(new))
            if ncode in parent:
                continue
            parent[ncode] = (code, mi)
            if ncode == goal_code:
                rounds = []
                cur = ncode
                while parent[cur][1] >= 0:
                    prev, used = parent[cur]
                    rounds.append(moves[used])
                    cur = prev
                rounds.reverse()
                return SearchResult(len(rounds), Schedule(tuple(rounds)), len(parent))
            frontier.append(ncode)
    raise TooLargeError(
        "target unreachable under the chosen branching set"
        if branching != "all"
        else "target unreachable (disconnected input?)"
    )


def exact_rt(
    g: Graph,
    *,
    limit: int = DEFAULT_WORST_LIMIT,
    branching: str = "all",
) -> WorstCase:
    """max over permutations of the exact routing depth, via one backward BFS
    from the identity over the full configuration graph."""
    require_connected(g)
    if g.n > limit:
        raise TooLargeError(f"n={g.n} exceeds the worst-case limit {limit}")
    moves = _branching(g, branching)
    start = _pack(tuple(range(g.n)))
    dist: dict[int, int] = {start: 0}
    frontier = deque([start])
    far = start
    while frontier:
        code = frontier.popleft()
        tokens = _unpack(code, g.n)
        for matching in moves:
            new = list(tokens)
            for u, v in matching:
                new[u], new[v] = new[v], new[u]
            ncode = _pack(tuple(new))
            if ncode not in dist:
                dist[ncode] = dist[code] + 1
                frontier.append(ncode)
                far = ncode
    total = 1
    for k in range(2, g.n + 1):
        total *= k
    if len(dist) != total:
        raise TooLargeError("configuration graph not fully reachable")
    tokens = _unpack(far, g.n)
    # tokens[w] = v means v's token sits at w, so pi(v) = w
    mapping = [0] * g.n
    for w, v in enumerate(tokens):
        mapping[v] = w
    return WorstCase(dist[far], Permutation(tuple(mapping)), len(dist))


def exact_rt_all(g: Graph, *, limit: int = DEFAULT_WORST_LIMIT) -> dict[Permutation, int]:
    """Exact routing depth for every permutation at once (backward BFS)."""
    require_connected(g)
    if g.n > limit:
        raise TooLargeError(f"n={g.n} exceeds the worst-case limit {limit}")
    moves = _branching(g, "all")
    start = _pack(tuple(range(g.n)))
    dist: dict[int, int] = {start: 0}
    frontier = deque([start])
    while frontier:
        code = frontier.popleft()
        tokens = _unpack(code, g.n)
        for matching in moves:
            new = list(tokens)
            for u, v in matching:
                new[u], new[v] = new[v], new[u]
            ncode = _pack(tuple(new))
            if ncode not in dist:
                dist[ncode] = dist[code] + 1
                frontier.append(ncode)
    out: dict[Permutation, int] = {}
    for perm in iter_permutations(range(g.n)):
        tokens = [0] * g.n
        for v in range(g.n):
            tokens[perm[v]] = v
        code = _pack(tuple(tokens))
        if code not in dist:
            raise TooLargeError("configuration graph not fully reachable")
        out[Permutation(tuple(perm))] = dist[code]
    return out
