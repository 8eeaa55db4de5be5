"""Randomized routing for arbitrary permutations via glued lazy random walks.

For an order-two permutation, each transposed pair (v, s(v)) gets a pair of
length-l lazy walks conditioned to meet at a common terminal sampled from the
stationary distribution; the second walk is reversed and glued on, giving a
2l-step walk from v to s(v). Pairs whose walks avoid each other execute in
parallel; interference statistics decide the grouping and a Las Vegas retry
guards the tail.

Execution detail: tokens are exchanged along the loop-erased glued walk with
the symmetric two-end crossing gadget, which keeps every round a matching and
restores interior tokens. Parallel classes are built from full vertex
disjointness of the walks (stricter than the timed interference rule used for
the reported counts), so merged rounds stay matchings after loop erasure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadParamsError,
    RetriesExhaustedError,
    UnreachableEndpointError,
)
from .graphs import Graph, require_connected
from .routing import Permutation, Schedule, batch_disjoint_paths, merge_exchanges, verify_schedule
from .spectral import spectral_gap

#: interference ceiling multiplier from the tail bound: I(v) < 120 * l * d_star
INTERFERENCE_FACTOR = 120

#: walk half-length multiplier: l = ceil(20 ln(n) / spectral_gap)
LENGTH_FACTOR = 20


def lazy_transition_matrix(g: Graph) -> np.ndarray:
    """Column-stochastic lazy walk matrix: stay with probability 1/2, else
    move to a uniform neighbor. P[v, u] is the probability of stepping u -> v."""
    n = g.n
    p = np.zeros((n, n))
    for u in range(n):
        p[u, u] = 0.5
        d = g.degrees[u]
        for w in g.adjacency[u]:
            p[w, u] = 0.5 / d
    return p


def walk_length(g: Graph, lam: float | None = None) -> int:
    if g.n < 2:
        return 1
    lam = spectral_gap(g) if lam is None else lam
    return max(1, math.ceil(LENGTH_FACTOR * math.log(g.n) / lam))


def _sample_bridge(
    p_pows: Sequence[np.ndarray], v: int, w: int, l: int, rng
) -> tuple[int, ...]:
    """Sample a lazy walk of length l from v conditioned to end at w.

    Step t from vertex u picks z with probability
    P[z, u] * P^{l-t-1}[w, z] / P^{l-t}[w, u]; the denominators telescope so
    each step distribution is exactly normalized.
    """
    p = p_pows[1]
    walk = [v]
    for t in range(l):
        u = walk[-1]
        remain = l - t - 1
        weights = p[:, u] * p_pows[remain][w, :]
        total = weights.sum()
        if total <= 0.0:
            raise UnreachableEndpointError(
                f"terminal {w} unreachable from {u} in {remain + 1} steps"
            )
        walk.append(int(rng.choice(len(weights), p=weights / total)))
    if walk[-1] != w:
        raise UnreachableEndpointError("bridge failed to land on its terminal")
    return tuple(walk)


@dataclass(frozen=True)
class WalkSystem:
    """Glued walks for the transposed pairs of an involution."""

    sigma: Permutation
    l: int
    pairs: tuple[tuple[int, int], ...]
    walks: dict[int, tuple[int, ...]]  # per moved vertex; 2l+1 vertices
    interference_counts: dict[int, int]
    interference_graph: dict[int, set[int]]  # adjacency over pair indices
    d_star: float

    @property
    def max_interference(self) -> int:
        return max(self.interference_counts.values(), default=0)

    @property
    def interference_bound(self) -> float:
        return INTERFERENCE_FACTOR * self.l * self.d_star


def _timed_interference(a: np.ndarray, b: np.ndarray) -> bool:
    """True when the walks share a vertex at time offsets of at most one."""
    return bool(
        np.any(a == b) or np.any(a[1:] == b[:-1]) or np.any(a[:-1] == b[1:])
    )


def pair_interferes(w1: Sequence[int], w2: Sequence[int]) -> bool:
    """Interference between two glued walks, counting the reversed partner
    orientation as well (index j and its mirror 2l - j)."""
    a = np.asarray(w1)
    b = np.asarray(w2)
    return _timed_interference(a, b) or _timed_interference(a, b[::-1])


def sample_glued_walks(
    g: Graph,
    sigma: Permutation,
    l: int,
    seed: int | Sequence[int],
    *,
    max_retries: int = 64,
) -> WalkSystem:
    """Sample the glued walk system for an involution.

    Each pair draws its own substream from (seed, pair index), so results do
    not depend on evaluation order. Terminals are drawn from the degree
    distribution and resampled (up to ``max_retries``) if unreachable within
    l steps from either endpoint.
    """
    if not sigma.is_involution():
        raise BadParamsError("walk sampling needs an order-two permutation")
    if l < 1:
        raise BadParamsError("walk half-length must be >= 1")
    moved = [v for v in range(g.n) if sigma.mapping[v] != v]
    pairs = tuple(
        (v, sigma.mapping[v]) for v in moved if v < sigma.mapping[v]
    )
    dmin, dmax = min(g.degrees), max(g.degrees)
    d_star = dmax / dmin

    seed_seq = [seed] if isinstance(seed, int) else list(seed)
    walks: dict[int, tuple[int, ...]] = {}
    if pairs:
        p = lazy_transition_matrix(g)
        p_pows = [np.eye(g.n)]
        for _ in range(l):
            p_pows.append(p_pows[-1] @ p)
        degs = np.asarray(g.degrees, dtype=float)
        stationary = degs / degs.sum()
        for idx, (v, sv) in enumerate(pairs):
            rng = np.random.default_rng(seed_seq + [idx])
            for attempt in range(max_retries):
                w = int(rng.choice(g.n, p=stationary))
                if p_pows[l][w, v] > 0.0 and p_pows[l][w, sv] > 0.0:
                    break
            else:
                raise UnreachableEndpointError(
                    f"no reachable terminal for pair ({v},{sv}) after {max_retries} draws"
                )
            half_v = _sample_bridge(p_pows, v, w, l, rng)
            half_sv = _sample_bridge(p_pows, sv, w, l, rng)
            glued = half_v + tuple(reversed(half_sv))[1:]
            walks[v] = glued
            walks[sv] = tuple(reversed(glued))

    graph_adj: dict[int, set[int]] = {i: set() for i in range(len(pairs))}
    counts: dict[int, int] = {v: 0 for v in walks}
    for i in range(len(pairs)):
        wi = walks[pairs[i][0]]
        for j in range(i + 1, len(pairs)):
            if pair_interferes(wi, walks[pairs[j][0]]):
                graph_adj[i].add(j)
                graph_adj[j].add(i)
    for i, (v, sv) in enumerate(pairs):
        # both orientations of every interfering pair count as other walks
        counts[v] = counts[sv] = 2 * len(graph_adj[i])
    return WalkSystem(
        sigma=sigma,
        l=l,
        pairs=pairs,
        walks=walks,
        interference_counts=counts,
        interference_graph=graph_adj,
        d_star=d_star,
    )


def color_walks(ws: WalkSystem) -> list[list[int]]:
    """Greedy classes of pair indices over the interference graph, colored in
    descending degree order with index ties. Class count <= maxdeg + 1."""
    return _greedy_classes(ws.interference_graph)


def _greedy_classes(adj: dict[int, set[int]]) -> list[list[int]]:
    order = sorted(adj, key=lambda i: (-len(adj[i]), i))
    color: dict[int, int] = {}
    for i in order:
        used = {color[j] for j in adj[i] if j in color}
        c = 0
        while c in used:
            c += 1
        color[i] = c
    classes: list[list[int]] = [[] for _ in range(max(color.values(), default=-1) + 1)]
    for i in sorted(color):
        classes[color[i]].append(i)
    return classes


def loop_erase(walk: Sequence[int]) -> list[int]:
    """Loop-erased walk: a simple path with the same endpoints."""
    path: list[int] = []
    index: dict[int, int] = {}
    for v in walk:
        if v in index:
            for dropped in path[index[v] + 1 :]:
                del index[dropped]
            del path[index[v] + 1 :]
        else:
            index[v] = len(path)
            path.append(v)
    return path


def _execution_classes(
    pairs: Sequence[tuple[int, int]], paths: list[list[int]]
) -> list[list[int]]:
    """Group pair indices so grouped loop-erased paths share no vertex at all.

    Full walk-level disjointness would also work; using the erased paths keeps
    classes smaller while still guaranteeing that merged rounds are matchings.
    """
    adj: dict[int, set[int]] = {i: set() for i in range(len(pairs))}
    vsets = [set(p) for p in paths]
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if vsets[i] & vsets[j]:
                adj[i].add(j)
                adj[j].add(i)
    return _greedy_classes(adj)


def route_order_two(
    g: Graph,
    sigma: Permutation,
    seed: int,
    *,
    l: int | None = None,
    max_attempts: int = 32,
) -> Schedule:
    """Route an involution with the glued-walk method (Las Vegas).

    Walk systems whose worst interference count exceeds the 120*l*d_star
    ceiling are resampled with a fresh derived seed; the schedule itself is
    always verified before being returned.
    """
    require_connected(g)
    if not sigma.is_involution():
        raise BadParamsError("route_order_two needs an order-two permutation")
    if sigma.is_identity():
        return Schedule(())
    lam = spectral_gap(g)
    half = walk_length(g, lam) if l is None else l
    last_max = None
    for attempt in range(max_attempts):
        ws = sample_glued_walks(g, sigma, half, seed=[seed, attempt])
        last_max = ws.max_interference
        if last_max <= ws.interference_bound:
            break
    else:
        raise RetriesExhaustedError(
            f"interference ceiling {INTERFERENCE_FACTOR}*l*d_star exceeded in "
            f"{max_attempts} attempts (last max {last_max})"
        )
    paths = [loop_erase(ws.walks[v]) for v, _ in ws.pairs]
    rounds: list[list] = []
    for cls in _execution_classes(ws.pairs, paths):
        rounds.extend(merge_exchanges([paths[i] for i in cls]))
    schedule = Schedule.from_rounds(rounds)
    check = verify_schedule(g, sigma, schedule)
    if not check.valid:
        raise AssertionError(f"internal defect: walk schedule invalid: {check.failure}")
    return schedule


def route_general(g: Graph, pi: Permutation, seed: int) -> Schedule:
    """Route an arbitrary permutation as two sequential involutions."""
    require_connected(g)
    if pi.is_identity():
        return Schedule(())
    if pi.is_involution():
        return route_order_two(g, pi, seed)
    from .routing import involution_decompose

    f1, f2 = involution_decompose(pi)
    sched1 = route_order_two(g, f1, seed) if not f1.is_identity() else Schedule(())
    sched2 = route_order_two(g, f2, seed + 1) if not f2.is_identity() else Schedule(())
    combined = Schedule(sched1.rounds + sched2.rounds)
    check = verify_schedule(g, pi, combined)
    if not check.valid:
        raise AssertionError(f"internal defect: combined schedule invalid: {check.failure}")
    return combined


def depth_bound(g: Graph, l: int | None = None) -> float:
    """The general-permutation depth budget 4l(120 l d_star + 1)."""
    half = walk_length(g) if l is None else l
    dmin, dmax = min(g.degrees), max(g.degrees)
    return 4 * half * (INTERFERENCE_FACTOR * half * (dmax / dmin) + 1)
