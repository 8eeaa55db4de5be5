"""Dense state-vector simulator with entropy accounting.

Amplitudes live in a complex vector of length 2^q; qubit i is tensor axis i.
Entropies are von Neumann entropies in bits (log base 2) with eigenvalues
below 1e-12 dropped. The default qubit cap is 14 (dimension 16384).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadSubsetError,
    NotHermitianError,
    NotUnitaryError,
    SupportViolationError,
    TooManyQubitsError,
)
from .graphs import Cut, Graph

DEFAULT_QUBIT_CAP = 14
ENTROPY_EIGENVALUE_FLOOR = 1e-12
NORM_TOL = 1e-9

#: two-qubit interaction budget: the canonical coefficients of every
#: interaction must satisfy |mu_x| + |mu_y| + |mu_z| <= 3 pi / 4, which makes
#: the fastest swap take one time unit.
INTERACTION_NORM_BUDGET = 3.0 * math.pi / 4.0


class QuantumState:
    """Pure state on an ordered register of labeled qubits."""

    def __init__(self, amplitudes: np.ndarray, labels: Sequence):
        vec = np.asarray(amplitudes, dtype=complex)
        if vec.size != 2 ** len(labels):
            raise BadSubsetError("amplitude length does not match label count")
        self.amplitudes = vec
        self.labels = tuple(labels)
        self._index = {q: i for i, q in enumerate(self.labels)}

    @property
    def q(self) -> int:
        return len(self.labels)

    def axis(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise BadSubsetError(f"unknown qubit label {label!r}") from None

    def copy(self) -> "QuantumState":
        return QuantumState(self.amplitudes.copy(), self.labels)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_norm(self) -> None:
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise NotUnitaryError(f"state norm drifted to {self.norm()}")


def zero_state(labels: Sequence, qubit_cap: int = DEFAULT_QUBIT_CAP) -> QuantumState:
    if len(labels) > qubit_cap:
        raise TooManyQubitsError(f"{len(labels)} qubits exceeds the cap {qubit_cap}")
    vec = np.zeros(2 ** len(labels), dtype=complex)
    vec[0] = 1.0
    return QuantumState(vec, labels)


def product_state(single_states: Sequence[np.ndarray], labels: Sequence,
                  qubit_cap: int = DEFAULT_QUBIT_CAP) -> QuantumState:
    if len(labels) > qubit_cap:
        raise TooManyQubitsError(f"{len(labels)} qubits exceeds the cap {qubit_cap}")
    vec = np.array([1.0 + 0.0j])
    for s in single_states:
        vec = np.kron(vec, np.asarray(s, dtype=complex))
    state = QuantumState(vec, labels)
    state.check_norm()
    return state


def random_qubit(rng) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_state(labels: Sequence, rng, qubit_cap: int = DEFAULT_QUBIT_CAP) -> QuantumState:
    """Haar-ish random pure state (normalized complex Gaussian vector)."""
    if len(labels) > qubit_cap:
        raise TooManyQubitsError(f"{len(labels)} qubits exceeds the cap {qubit_cap}")
    dim = 2 ** len(labels)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return QuantumState(v / np.linalg.norm(v), labels)


# ---------------------------------------------------------------------------
# gates


I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PAULIS = {"i": I2, "x": X, "y": Y, "z": Z}

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def _apply_operator(state: QuantumState, op: np.ndarray, qubits: Sequence) -> None:
    """Apply a 2^k x 2^k operator to the listed qubits, in place."""
    k = len(qubits)
    axes = [state.axis(q) for q in qubits]
    if len(set(axes)) != k:
        raise BadSubsetError("repeated qubit in operator target")
    tensor = state.amplitudes.reshape([2] * state.q)
    rest = [a for a in range(state.q) if a not in axes]
    perm = axes + rest
    moved = np.transpose(tensor, perm).reshape(2**k, -1)
    moved = op @ moved
    tensor = moved.reshape([2] * state.q)
    inv = np.argsort(perm)
    state.amplitudes = np.transpose(tensor, inv).reshape(-1)


def apply_gate(state: QuantumState, unitary: np.ndarray, qubits: Sequence) -> QuantumState:
    """Apply a unitary on the given qubits (in place; returns the state)."""
    u = np.asarray(unitary, dtype=complex)
    k = len(qubits)
    if u.shape != (2**k, 2**k):
        raise BadSubsetError(f"operator shape {u.shape} does not fit {k} qubits")
    if np.linalg.norm(u.conj().T @ u - np.eye(2**k)) > 1e-10:
        raise NotUnitaryError("operator is not unitary within 1e-10")
    _apply_operator(state, u, qubits)
    state.check_norm()
    return state


def require_hermitian(h: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if np.linalg.norm(h - h.conj().T) > tol * max(1.0, np.linalg.norm(h)):
        raise NotHermitianError("operator is not Hermitian")
    return h


def evolve(state: QuantumState, hamiltonian: np.ndarray, qubits: Sequence,
           time: float) -> QuantumState:
    """Apply exp(-i H t) on the listed qubits via eigendecomposition."""
    if len(qubits) > 12:
        raise TooManyQubitsError("local evolution capped at 12 qubits")
    h = require_hermitian(hamiltonian)
    vals, vecs = np.linalg.eigh(h)
    u = (vecs * np.exp(-1j * vals * time)) @ vecs.conj().T
    _apply_operator(state, u, qubits)
    state.check_norm()
    return state


def spectral_norm(h: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(require_hermitian(h)))))


def fidelity(a: QuantumState, b: QuantumState) -> float:
    if a.labels != b.labels:
        raise BadSubsetError("states live on different registers")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


# ---------------------------------------------------------------------------
# entropy


def reduced_entropy(state: QuantumState, subset: Iterable) -> float:
    """Von Neumann entropy (bits) of the reduced state on ``subset``."""
    axes = sorted(state.axis(q) for q in set(subset))
    if not axes or len(axes) == state.q:
        raise BadSubsetError("entropy needs a nonempty strict subset of qubits")
    tensor = state.amplitudes.reshape([2] * state.q)
    rest = [a for a in range(state.q) if a not in axes]
    mat = np.transpose(tensor, axes + rest).reshape(2 ** len(axes), -1)
    sv = np.linalg.svd(mat, compute_uv=False)
    probs = sv**2
    probs = probs[probs > ENTROPY_EIGENVALUE_FLOOR]
    return float(-np.sum(probs * np.log2(probs)))


def entropy_symmetry_check(state: QuantumState, subset: Iterable,
                           tol: float = 1e-8) -> bool:
    """For a pure state the two sides of any bipartition agree in entropy."""
    subset = set(subset)
    comp = [q for q in state.labels if q not in subset]
    return abs(reduced_entropy(state, subset) - reduced_entropy(state, comp)) <= tol


# ---------------------------------------------------------------------------
# two-qubit canonical form


@dataclass(frozen=True)
class CanonicalForm:
    mu_x: float
    mu_y: float
    mu_z: float
    norm_ok: bool

    @property
    def interaction_norm(self) -> float:
        return abs(self.mu_x) + abs(self.mu_y) + abs(self.mu_z)


def pauli_coefficients(h: np.ndarray) -> dict[tuple[str, str], float]:
    """Real coefficients of a two-qubit Hermitian operator in the Pauli basis."""
    h = require_hermitian(h)
    if h.shape != (4, 4):
        raise BadSubsetError("canonical form is defined for 4x4 operators")
    out = {}
    for a, pa in PAULIS.items():
        for b, pb in PAULIS.items():
            coeff = np.trace(np.kron(pa, pb) @ h) / 4.0
            out[(a, b)] = float(coeff.real)
    return out


def canonical_form(h: np.ndarray, tol: float = 1e-9) -> CanonicalForm:
    """Local-unitary normal form of the interaction part of a two-qubit
    Hamiltonian: signed singular values of the 3x3 coupling block, ordered
    mu_x >= mu_y >= |mu_z|, with the sign of the determinant on mu_z.

    norm_ok reports whether the interaction fits the routing time budget
    (|mu_x| + |mu_y| + |mu_z| <= 3 pi / 4).
    """
    coeffs = pauli_coefficients(h)
    m = np.array(
        [[coeffs[(a, b)] for b in "xyz"] for a in "xyz"]
    )
    sv = np.linalg.svd(m, compute_uv=False)
    det = float(np.linalg.det(m))
    mu = [float(sv[0]), float(sv[1]), float(sv[2])]
    if det < 0:
        mu[2] = -mu[2]
    total = abs(mu[0]) + abs(mu[1]) + abs(mu[2])
    return CanonicalForm(mu[0], mu[1], mu[2], total <= INTERACTION_NORM_BUDGET + tol)


# ---------------------------------------------------------------------------
# boundary entropy checks


@dataclass(frozen=True)
class SimCut:
    """A qubit bipartition with the graph-derived boundary structure mapped
    onto register labels."""

    x: frozenset
    xbar: frozenset
    delta_x: frozenset
    delta_xbar: frozenset
    boundary_edges: tuple[tuple[int, int], ...]


def sim_cut(g: Graph, x: Iterable[int]) -> SimCut:
    from .graphs import cut as graph_cut

    c = graph_cut(g, x)
    return SimCut(
        x=c.x,
        xbar=c.xbar,
        delta_x=c.delta_x,
        delta_xbar=c.delta_xbar,
        boundary_edges=c.boundary_edges,
    )


@dataclass(frozen=True)
class SteResult:
    delta_s: float
    bound: float
    ok: bool


def ste_check(
    state_before: QuantumState,
    state_after: QuantumState,
    cut: SimCut,
    layer_support: Iterable,
    tol: float = 1e-8,
) -> SteResult:
    """Entropy change of one layer against twice the smaller boundary side.

    A layer that straddles the cut must keep its straddling support inside
    the boundary sets (X-side support within delta X-bar, complement support
    within delta X); layers confined to one side are fine anywhere because
    they cannot move the entropy.
    """
    support = set(layer_support)
    in_x = support & cut.x
    in_xbar = support & cut.xbar
    if in_x and in_xbar:
        if not (in_x <= cut.delta_xbar and in_xbar <= cut.delta_x):
            raise SupportViolationError(
                "layer touches both sides outside the boundary sets"
            )
    ds = abs(
        reduced_entropy(state_after, cut.x) - reduced_entropy(state_before, cut.x)
    )
    bound = 2.0 * min(len(cut.delta_x), len(cut.delta_xbar))
    return SteResult(ds, bound, ds <= bound + tol)


def apply_layer(
    state: QuantumState,
    gates: Sequence[tuple[np.ndarray, tuple]],
    monitor_cuts: Sequence[SimCut] = (),
    tol: float = 1e-8,
) -> list[SteResult]:
    """Apply a parallel layer of gates, asserting disjoint targets and the
    per-layer entropy bound for every monitored cut.

    Only the support of gates that actually cross a monitored cut is handed
    to the entropy check; one-sided gates cannot change that cut's entropy.
    """
    used: set = set()
    before = state.copy() if monitor_cuts else None
    for _, qubits in gates:
        if used & set(qubits):
            raise BadSubsetError("layer gates overlap on a qubit")
        used |= set(qubits)
    for u, qubits in gates:
        apply_gate(state, u, qubits)
    results = []
    for c in monitor_cuts:
        crossing_support: set = set()
        for _, qubits in gates:
            qs = set(qubits)
            if (qs & c.x) and (qs & c.xbar):
                crossing_support |= qs
        res = ste_check(before, state, c, crossing_support, tol)
        if not res.ok:
            raise AssertionError(
                f"internal defect: layer entropy change {res.delta_s} above {res.bound}"
            )
        results.append(res)
    return results


# ---------------------------------------------------------------------------
# entanglement capacity


@dataclass(frozen=True)
class CapacityResult:
    rate: float
    sie_bound: float
    cut_bound: float | None
    ok_sie: bool
    ok_cut: bool | None
    sie_bound_conjectured: float
    within_conjectured: bool


def entanglement_capacity(
    state: QuantumState,
    terms: Sequence[tuple[tuple[int, int], np.ndarray]],
    cut: SimCut,
    alpha: float = 4.0,
    step: float = 1e-5,
    tol: float = 1e-4,
) -> CapacityResult:
    """Finite-difference entropy rate dS_X/dt for a boundary Hamiltonian.

    ``terms`` maps graph edges (qubit label pairs) to 4x4 Hermitian blocks;
    every endpoint must lie in the boundary sets. The rate is checked against
    the incremental-entangling bound alpha * ||H|| * min(|dX|, |dXbar|) and,
    when every crossing term fits the interaction budget, against the cut
    bound (3 pi alpha / 4) * |boundary edges|.
    """
    boundary = cut.delta_x | cut.delta_xbar
    qubits = sorted({q for (u, v), _ in terms for q in (u, v)})
    for (u, v), block in terms:
        if u not in boundary or v not in boundary:
            raise SupportViolationError(f"term on ({u},{v}) leaves the boundary")
        require_hermitian(block)
    if not terms:
        return CapacityResult(0.0, 0.0, 0.0, True, True, 0.0, True)

    pos = {q: i for i, q in enumerate(qubits)}
    dim = 2 ** len(qubits)
    h_total = np.zeros((dim, dim), dtype=complex)
    for (u, v), block in terms:
        h_total += _embed_two_qubit(block, pos[u], pos[v], len(qubits))

    def entropy_at(t: float) -> float:
        s = state.copy()
        if t != 0.0:
            evolve(s, h_total, qubits, t)
        return reduced_entropy(s, cut.x)

    def central(hh: float) -> float:
        return (entropy_at(hh) - entropy_at(-hh)) / (2.0 * hh)

    d1 = central(step)
    d2 = central(step / 2.0)
    rate = d1
    if abs(d1 - d2) > 1e-5:
        rate = (4.0 * d2 - d1) / 3.0  # Richardson refinement

    log_d = min(len(cut.delta_x), len(cut.delta_xbar))
    norm = spectral_norm(h_total)
    sie_bound = alpha * norm * log_d
    sie_conj = 2.0 * norm * log_d
    crossing_normalized = True
    for (u, v), block in terms:
        crossing = (u in cut.x) != (v in cut.x)
        if crossing and not canonical_form(block).norm_ok:
            crossing_normalized = False
    cut_bound = (
        3.0 * math.pi * alpha / 4.0 * len(cut.boundary_edges)
        if crossing_normalized
        else None
    )
    return CapacityResult(
        rate=rate,
        sie_bound=sie_bound,
        cut_bound=cut_bound,
        ok_sie=rate <= sie_bound + tol,
        ok_cut=(rate <= cut_bound + tol) if cut_bound is not None else None,
        sie_bound_conjectured=sie_conj,
        within_conjectured=rate <= sie_conj + tol,
    )


def _embed_two_qubit(block: np.ndarray, i: int, j: int, q: int) -> np.ndarray:
    """Tensor-embed a 4x4 operator acting on axes (i, j) of a q-qubit space."""
    big = np.kron(np.asarray(block, dtype=complex), np.eye(2 ** (q - 2)))
    big = big.reshape([2] * (2 * q))
    perm = [i, j] + [a for a in range(q) if a not in (i, j)]
    inv = [0] * q  # inv[qubit] = axis position in the kron ordering
    for pos, qubit in enumerate(perm):
        inv[qubit] = pos
    order = inv + [q + p for p in inv]
    return np.transpose(big, order).reshape(2**q, 2**q)
