"""End-to-end protocol simulations: Bell-pair entropy saturation through a
small vertex boundary, W-state-mediated transfer on the vertex barbell,
boundary-encoded constant-depth CZ, and the fast-partition time accounting.

All reported times are in swap units (the two-qubit interaction normalization
makes the fastest swap take exactly one unit)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BadParamsError, BadSizesError, EmptySideError, TooManyQubitsError
from .graphs import Graph, build_graph, cut
from .routing import Permutation
from .sim import (
    CNOT,
    CZ,
    DEFAULT_QUBIT_CAP,
    H,
    SWAP,
    QuantumState,
    SteResult,
    _embed_two_qubit,
    apply_gate,
    apply_layer,
    canonical_form,
    evolve,
    fidelity,
    product_state,
    random_qubit,
    reduced_entropy,
    sim_cut,
    zero_state,
)

# ---------------------------------------------------------------------------
# Bell-pair entropy saturation (boundary-throttled routing of pair ends)


@dataclass(frozen=True)
class Algorithm1Result:
    """Per-round entropy trace for the saturation schedule.

    ``trace`` holds S_X in bits after 0, 1, ..., 2k-1 rounds. The combined
    change delta_s_x + delta_s_xbar is the quantity the depth bound counts;
    for a pure state the two sides match, so it equals twice the final S_X.
    """

    x_size: int
    delta_size: int
    k: int
    trace: tuple[float, ...]
    delta_s_x: float
    delta_s_xbar: float
    ste_results: tuple[SteResult, ...]
    saturated: tuple[bool, ...]

    @property
    def depth(self) -> int:
        return len(self.trace) - 1

    @property
    def delta_s_combined(self) -> float:
        return self.delta_s_x + self.delta_s_xbar

    @property
    def ste_ok(self) -> bool:
        return all(r.ok for r in self.ste_results)


def _prepare_bell(state: QuantumState, a, b) -> None:
    apply_gate(state, H, (a,))
    apply_gate(state, CNOT, (a, b))


def run_algorithm1(
    x_size: int, delta_size: int, k: int, qubit_cap: int = DEFAULT_QUBIT_CAP
) -> Algorithm1Result:
    """Simulate the boundary-swap saturation schedule.

    Host layout: X of size 2k*|dX|, a boundary dX fully connected to X, and a
    bulk Y completing the complement to |X| vertices. The initial state holds
    |X|/2 Bell pairs inside X and |X|/2 inside the complement with every
    boundary vertex on a distinct pair. Odd rounds swap unrouted pair ends
    between X and the boundary; even rounds refill the boundary from the
    bulk. After 2k-1 rounds every pair spans the cut and S_X has climbed to
    |X| in steps of 2|dX| per odd round, matching the depth bound at every
    odd step.
    """
    if k < 1 or delta_size < 1:
        raise BadSizesError("need k >= 1 and a nonempty boundary")
    if x_size != 2 * k * delta_size:
        raise BadSizesError(
            f"x_size must equal 2*k*delta_size = {2 * k * delta_size}, got {x_size}"
        )
    total = 2 * x_size
    if total > qubit_cap:
        raise TooManyQubitsError(f"{total} qubits exceeds the cap {qubit_cap}")

    xs = list(range(x_size))
    dx = list(range(x_size, x_size + delta_size))
    ys = list(range(x_size + delta_size, total))
    edges = [(u, d) for u in xs for d in dx] + [(d, y) for d in dx for y in ys]
    host = build_graph(total, edges)
    c = sim_cut(host, xs)

    state = zero_state(range(total), qubit_cap)
    x_pairs = [(xs[2 * i], xs[2 * i + 1]) for i in range(x_size // 2)]
    xbar_pairs = [(dx[i], ys[i]) for i in range(delta_size)]
    rest = ys[delta_size:]
    xbar_pairs += [(rest[2 * i], rest[2 * i + 1]) for i in range(len(rest) // 2)]
    for a, b in x_pairs + xbar_pairs:
        _prepare_bell(state, a, b)

    pending_x = [p[0] for p in x_pairs]  # one end of each X pair leaves
    pending_bulk = [p[0] for p in xbar_pairs[delta_size:]]

    trace = [reduced_entropy(state, xs)]
    ste_all: list[SteResult] = []
    saturated: list[bool] = []
    for rnd in range(1, 2 * k):
        if rnd % 2 == 1:
            outgoing = [pending_x.pop(0) for _ in dx]
            swaps = [(SWAP, (u, d)) for u, d in zip(outgoing, dx)]
        else:
            incoming = [pending_bulk.pop(0) for _ in dx]
            swaps = [(SWAP, (y, d)) for y, d in zip(incoming, dx)]
        ste_all.extend(apply_layer(state, swaps, monitor_cuts=(c,)))
        s_x = reduced_entropy(state, xs)
        trace.append(s_x)
        if rnd % 2 == 1:
            s_xbar = reduced_entropy(state, dx + ys)
            bound = (s_x + s_xbar) / (2 * delta_size) - 1
            saturated.append(abs(bound - rnd) <= 1e-8)
    s_x = trace[-1]
    s_xbar = reduced_entropy(state, dx + ys)
    return Algorithm1Result(
        x_size=x_size,
        delta_size=delta_size,
        k=k,
        trace=tuple(trace),
        delta_s_x=s_x - trace[0],
        delta_s_xbar=s_xbar - trace[0],
        ste_results=tuple(ste_all),
        saturated=tuple(saturated),
    )


# ---------------------------------------------------------------------------
# W-state transfer


def hop_term() -> np.ndarray:
    """Excitation hopping between two qubits: (XX + YY) / 2."""
    xx = np.kron([[0, 1], [1, 0]], [[0, 1], [1, 0]]).astype(complex)
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]]).astype(complex)
    return (xx + yy) / 2.0


def w_coupling_matrix(s: int) -> np.ndarray:
    """Hub-to-set coupling in the single-excitation subspace.

    Basis order: vacuum, excitation on the hub, excitation on set member i.
    """
    h = np.zeros((s + 2, s + 2))
    for i in range(s):
        h[1, 2 + i] = h[2 + i, 1] = 1.0
    return h


@dataclass(frozen=True)
class WTransferResult:
    s: int
    fidelity: float
    elapsed: float
    encoded_ok: bool


def w_transfer(s: int, a0: complex = 0.6, a1: complex = 0.8) -> WTransferResult:
    """Transfer a qubit state across a hub set of size s.

    Encoding evolves the hub coupling for pi / (2 sqrt(s)), which maps the
    excited component onto -i times the equal single-excitation superposition
    over the set (the -i is physical; the inverse step at the target cancels
    it, so the end-to-end transfer is exact). Works in the number-conserving
    subspace: vacuum, hub, target, then the s set members.
    """
    if s < 1:
        raise BadParamsError("need a nonempty transfer set")
    norm = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
    a0, a1 = a0 / norm, a1 / norm
    t = math.pi / (2.0 * math.sqrt(s))
    dim = s + 3  # vacuum, source x, target u, set members
    h_enc = np.zeros((dim, dim))
    h_dec = np.zeros((dim, dim))
    for i in range(s):
        h_enc[1, 3 + i] = h_enc[3 + i, 1] = 1.0
        h_dec[2, 3 + i] = h_dec[3 + i, 2] = 1.0

    def unitary(h: np.ndarray, tt: float) -> np.ndarray:
        vals, vecs = np.linalg.eigh(h)
        return (vecs * np.exp(-1j * vals * tt)) @ vecs.conj().T

    psi = np.zeros(dim, dtype=complex)
    psi[0], psi[1] = a0, a1
    mid = unitary(h_enc, t) @ psi
    expected_mid = np.zeros(dim, dtype=complex)
    expected_mid[0] = a0
    expected_mid[3:] = -1j * a1 / math.sqrt(s)
    encoded_ok = bool(np.linalg.norm(mid - expected_mid) <= 1e-9)
    final = unitary(h_dec, -t) @ mid  # inverse step aimed at the target
    target = np.zeros(dim, dtype=complex)
    target[0], target[2] = a0, a1
    fid = float(abs(np.vdot(target, final)) ** 2)
    return WTransferResult(s, fid, 2.0 * t, encoded_ok)


# ---------------------------------------------------------------------------
# vertex-barbell routing with per-qubit ancillas


@dataclass(frozen=True)
class BarbellRouteResult:
    n: int
    total_time: float
    fidelity: float
    mode: str
    transfers: int


def _barbell_sides(n: int) -> tuple[list[int], int, list[int]]:
    left = list(range(n))
    center = n
    right = list(range(n + 1, 2 * n + 1))
    return left, center, right


def _validate_barbell_sigma(n: int, sigma: Permutation) -> None:
    left, center, right = _barbell_sides(n)
    if sigma.mapping[center] != center:
        raise BadParamsError("center vertex must stay fixed")
    if sigma.is_identity():
        return
    lset, rset = set(left), set(right)
    for v in left:
        if sigma.mapping[v] not in rset:
            raise BadParamsError("permutation must exchange the two cliques")
    for v in right:
        if sigma.mapping[v] not in lset:
            raise BadParamsError("permutation must exchange the two cliques")


def barbell_route_sim(
    n: int,
    sigma: Permutation | None = None,
    seed: int = 0,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
    mode: str = "auto",
) -> BarbellRouteResult:
    """Route a clique-exchanging permutation on the vertex barbell with one
    ancilla per qubit and W-state transfers through the center.

    Each vertex transfer costs 4T of Hamiltonian time with T = pi/(2 sqrt(n-1))
    (two encode-decode legs through the center); ancilla parking swaps are
    free. ``mode`` picks the full state-vector run when 4n+2 qubits fit the
    cap, otherwise the exact number-conserving subspace accounting.
    """
    if n < 2:
        raise BadParamsError("vertex barbell transfer needs cliques of size >= 2")
    left, center, right = _barbell_sides(n)
    verts = 2 * n + 1
    if sigma is None:
        mapping = list(range(verts))
        for i in range(n):
            mapping[left[i]] = right[i]
            mapping[right[i]] = left[i]
        sigma = Permutation(tuple(mapping))
    _validate_barbell_sigma(n, sigma)
    moved = [v for v in range(verts) if sigma.mapping[v] != v]
    t_leg = math.pi / (2.0 * math.sqrt(n - 1))
    total_time = 4.0 * t_leg * len(moved)
    if mode == "auto":
        mode = "full" if 4 * n + 2 <= qubit_cap else "subspace"

    if not moved:
        return BarbellRouteResult(n, 0.0, 1.0, mode, 0)
    if mode == "subspace":
        fid = _barbell_subspace_fidelity(n, sigma, seed, t_leg)
        return BarbellRouteResult(n, total_time, fid, mode, len(moved))
    if mode != "full":
        raise BadParamsError(f"unknown mode {mode!r}")
    if 4 * n + 2 > qubit_cap:
        raise TooManyQubitsError(f"{4 * n + 2} qubits exceeds the cap {qubit_cap}")

    rng = np.random.default_rng(seed)
    data = list(range(verts))
    anc = [verts + v for v in range(verts)]
    labels = data + anc
    singles = [random_qubit(rng) for _ in range(verts)]
    zero = np.array([1.0, 0.0], dtype=complex)
    state = product_state(singles + [zero] * verts, labels, qubit_cap)

    def park(v):
        apply_gate(state, SWAP, (v, anc[v]))

    for v in range(verts):
        park(v)

    def w_set(side: list[int], excluded: int) -> list[int]:
        return [v for v in side if v != excluded]

    def transfer(src: int, dst: int) -> None:
        side_src = left if src in left else right
        side_dst = left if dst in left else right
        s_src = w_set(side_src, src)
        s_dst = w_set(side_dst, dst)
        h_src = _w_hamiltonian_full(src, s_src)
        evolve(state, h_src, [src] + s_src, t_leg)
        h_hub = _w_hamiltonian_full(center, s_src)
        evolve(state, h_hub, [center] + s_src, -t_leg)
        h_hub2 = _w_hamiltonian_full(center, s_dst)
        evolve(state, h_hub2, [center] + s_dst, t_leg)
        h_dst = _w_hamiltonian_full(dst, s_dst)
        evolve(state, h_dst, [dst] + s_dst, -t_leg)

    remaining = set(moved)
    while remaining:
        start = min(remaining)
        park(start)  # retrieve the parked state
        cur = start
        while True:
            nxt = sigma.mapping[cur]
            transfer(cur, nxt)
            remaining.discard(cur)
            park(nxt)  # deposit; retrieves the next state if any
            cur = nxt
            if cur == start:
                break

    for v in range(verts):
        park(v)

    routed = [singles[sigma.inverse().mapping[v]] for v in range(verts)]
    target = product_state(routed + [zero] * verts, labels, qubit_cap)
    fid = fidelity(state, target)
    return BarbellRouteResult(n, total_time, fid, "full", len(moved))


def _w_hamiltonian_full(hub: int, members: Sequence[int]) -> np.ndarray:
    """Hub coupling as a dense operator on the qubit list [hub] + members."""
    k = len(members) + 1
    dim = 2**k
    h = np.zeros((dim, dim), dtype=complex)
    hop = hop_term()
    for i in range(1, k):
        h += _embed_two_qubit(hop, 0, i, k)
    return h


def _barbell_subspace_fidelity(n: int, sigma: Permutation, seed: int, t_leg: float) -> float:
    """Exact per-transfer accounting in the single-excitation subspace."""
    rng = np.random.default_rng(seed)
    s = n - 1
    h = w_coupling_matrix(s)  # hub coupling; reused for every leg
    vals, vecs = np.linalg.eigh(h)

    def leg(amplitudes: np.ndarray, tt: float) -> np.ndarray:
        u = (vecs * np.exp(-1j * vals * tt)) @ vecs.conj().T
        return u @ amplitudes

    total_fid = 1.0
    moved = [v for v in range(2 * n + 1) if sigma.mapping[v] != v]
    for _ in moved:
        a = random_qubit(rng)
        psi = np.zeros(s + 2, dtype=complex)
        psi[0], psi[1] = a[0], a[1]
        # encode at source, decode at center, encode at center, decode at target;
        # the subspace matrix is identical for every leg by symmetry
        out = leg(psi, t_leg)
        w_amp = out[2:]
        # reinject the W component at the next hub and undo
        back = np.zeros(s + 2, dtype=complex)
        back[0] = out[0]
        back[2:] = w_amp
        arrived = leg(back, -t_leg)
        psi2 = np.zeros(s + 2, dtype=complex)
        psi2[0], psi2[1] = arrived[0], arrived[1]
        out2 = leg(psi2, t_leg)
        back2 = np.zeros(s + 2, dtype=complex)
        back2[0] = out2[0]
        back2[2:] = out2[2:]
        final = leg(back2, -t_leg)
        ref = np.zeros(s + 2, dtype=complex)
        ref[0], ref[1] = a[0], a[1]
        total_fid *= float(abs(np.vdot(ref, final)) ** 2)
    return total_fid


# ---------------------------------------------------------------------------
# boundary-encoded CZ in the fast-partition Hamiltonian model


PROJECTOR_11 = np.diag([0.0, 0.0, 0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class FastCzResult:
    boundary_size: int
    elapsed: Fraction
    gate_fidelity: float
    phase_11: complex
    term_normalized: bool

    @property
    def elapsed_float(self) -> float:
        return float(self.elapsed)


def fast_cz(boundary_size: int, qubit_cap: int = DEFAULT_QUBIT_CAP) -> FastCzResult:
    """CZ between two bulk qubits through a GHZ-encoded boundary of b edges.

    Fan-out copies each logical bit onto its side of every boundary edge,
    the diagonal interaction 3*pi*|11><11| runs on all edges for time
    1/(3b), contributing phase -1 exactly when both logical bits are 1, and
    the fan-out is undone. Encode and decode are free local-side unitaries.
    """
    b = boundary_size
    if b < 1:
        raise BadParamsError("need at least one boundary edge")
    q = 2 * b + 2
    if q > qubit_cap:
        raise TooManyQubitsError(f"{q} qubits exceeds the cap {qubit_cap}")
    t = Fraction(1, 3 * b)

    # per-edge check: the interaction splits into single-qubit terms plus one
    # budget-saturating ZZ coupling
    term = 3.0 * math.pi * PROJECTOR_11
    zpart = canonical_form(term)
    term_normalized = zpart.norm_ok and abs(zpart.mu_x - 3.0 * math.pi / 4.0) < 1e-12

    v, u = 0, 1
    xside = [2 + i for i in range(b)]
    xbarside = [2 + b + i for i in range(b)]
    labels = list(range(q))
    dim_h = 2 ** (2 * b)
    h = np.zeros((dim_h, dim_h), dtype=complex)
    for i in range(b):
        h += 3.0 * math.pi * _embed_two_qubit(PROJECTOR_11, i, b + i, 2 * b)

    logical = np.zeros((4, 4), dtype=complex)
    for basis in range(4):
        vec = np.zeros(4, dtype=complex)
        vec[basis] = 1.0
        amps = np.zeros(2**q, dtype=complex)
        amps[basis << (q - 2)] = 1.0  # v, u are the two leading axes
        state = QuantumState(amps, labels)
        for x in xside:
            apply_gate(state, CNOT, (v, x))
        for x in xbarside:
            apply_gate(state, CNOT, (u, x))
        evolve(state, h, xside + xbarside, float(t))
        for x in xbarside:
            apply_gate(state, CNOT, (u, x))
        for x in xside:
            apply_gate(state, CNOT, (v, x))
        full = state.amplitudes.reshape(4, -1)
        logical[:, basis] = full[:, 0]
        if np.linalg.norm(full[:, 1:]) > 1e-10:
            raise AssertionError("internal defect: boundary failed to disentangle")
    fid = float(abs(np.trace(CZ.conj().T @ logical)) ** 2 / 16.0)
    return FastCzResult(
        boundary_size=b,
        elapsed=t,
        gate_fidelity=fid,
        phase_11=complex(logical[3, 3]),
        term_normalized=term_normalized,
    )


# ---------------------------------------------------------------------------
# fast-partition Hamiltonian routing accounting


@dataclass(frozen=True)
class FastHamiltonianResult:
    total_time: Fraction
    marked: int
    boundary_size: int
    swap_time: Fraction


def fast_hamiltonian_route(g: Graph, x, pi: Permutation) -> FastHamiltonianResult:
    """Time accounting for routing with free intra-partition interactions:
    each of the k marked tokens crosses via one swap built from three CZ
    equivalents at 1/(3 |boundary|) each, so the total is k / |boundary|."""
    c = cut(g, x)
    if len(c.x) > g.n // 2:
        raise EmptySideError("fast routing expects |X| <= n/2")
    b = len(c.boundary_edges)
    if b == 0:
        raise EmptySideError("edge boundary is empty")
    marked = sum(1 for v in c.x if pi.mapping[v] not in c.x)
    swap_time = Fraction(1, b)
    total = Fraction(marked, b)
    assert total <= Fraction(len(c.x), b)
    return FastHamiltonianResult(total, marked, b, swap_time)
