"""Normalized Laplacian spectrum and the exact expansion quantities.

The four expansion quantities (vertex, edge, matching, degree-weighted) are
minimized by explicit subset enumeration over all X with |X| <= n/2, using
exact rational arithmetic. The enumeration limit defaults to 20 vertices and
can be raised via the QROUTING_ENUM_LIMIT environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np

from .errors import IsolatedVertexError, NoConvergenceError, TooLargeError
from .graphs import Cut, Graph, boundary_matching, cut, require_connected

DEFAULT_ENUM_LIMIT = 20

#: eigenvalues below this are treated as exact zeros of the Laplacian
ZERO_TOL = 1e-9


def enum_limit() -> int:
    return int(os.environ.get("QROUTING_ENUM_LIMIT", DEFAULT_ENUM_LIMIT))


def normalized_laplacian(g: Graph) -> np.ndarray:
    """Dense symmetric normalized Laplacian with unit diagonal."""
    if min(g.degrees) == 0:
        raise IsolatedVertexError("normalized Laplacian needs min degree >= 1")
    d = np.asarray(g.degrees, dtype=float)
    lap = np.eye(g.n)
    inv_sqrt = 1.0 / np.sqrt(d)
    for u, v in g.edges:
        lap[u, v] = lap[v, u] = -inv_sqrt[u] * inv_sqrt[v]
    return lap


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: tuple[float, ...]
    spectral_gap: float


def eigenvalues(g: Graph) -> np.ndarray:
    lap = normalized_laplacian(g)
    return np.linalg.eigvalsh(lap)


def spectral_gap(g: Graph, *, residual_tol: float = 1e-8) -> float:
    """Smallest nonzero eigenvalue of the normalized Laplacian.

    Connectivity is verified combinatorially first, so the zero eigenspace
    has multiplicity one and the gap is unambiguous. The returned eigenpair
    is residual-checked against ``residual_tol``.
    """
    require_connected(g)
    lap = normalized_laplacian(g)
    vals, vecs = np.linalg.eigh(lap)
    idx = next((i for i, v in enumerate(vals) if v > ZERO_TOL), None)
    if idx is None:
        raise NoConvergenceError("no nonzero eigenvalue found")
    lam, vec = float(vals[idx]), vecs[:, idx]
    residual = float(np.linalg.norm(lap @ vec - lam * vec))
    if residual > residual_tol:
        raise NoConvergenceError(f"eigenpair residual {residual:.3e} too large")
    return lam


def spectral_summary(g: Graph) -> SpectralSummary:
    vals = eigenvalues(g)
    return SpectralSummary(tuple(float(v) for v in vals), spectral_gap(g))


# ---------------------------------------------------------------------------
# expansion quantities (exact)


@dataclass(frozen=True)
class ExpansionResult:
    value: Fraction
    witness: tuple[int, ...]


def _check_limit(g: Graph, limit: int | None) -> None:
    lim = enum_limit() if limit is None else limit
    if g.n > lim:
        raise TooLargeError(
            f"n={g.n} exceeds the enumeration limit {lim}; raise the limit or "
            "supply explicit cuts (exact enumeration only, no sampling mode)"
        )


def _minimize(g: Graph, ratio: Callable[[Cut, tuple[int, ...]], Fraction],
              limit: int | None) -> ExpansionResult:
    """Exact minimum of a cut ratio over all X with |X| <= n/2.

    Ties are broken toward the lexicographically smallest witness tuple so
    reports are reproducible regardless of enumeration order.
    """
    require_connected(g)
    _check_limit(g, limit)
    best: Fraction | None = None
    best_x: tuple[int, ...] | None = None
    for k in range(1, g.n // 2 + 1):
        for xs in combinations(range(g.n), k):
            c = cut(g, xs)
            val = ratio(c, xs)
            if best is None or val < best or (val == best and xs < best_x):
                best, best_x = val, xs
    if best is None:
        raise TooLargeError("graph too small for a nonempty proper subset")
    return ExpansionResult(best, best_x)


def vertex_expansion(g: Graph, limit: int | None = None) -> ExpansionResult:
    """min |delta X| / |X| over small sides X."""
    return _minimize(g, lambda c, xs: Fraction(len(c.delta_x), len(xs)), limit)


def edge_expansion(g: Graph, limit: int | None = None) -> ExpansionResult:
    """min |boundary edges of X| / |X|."""
    return _minimize(
        g, lambda c, xs: Fraction(len(c.boundary_edges), len(xs)), limit
    )


def matching_expansion(g: Graph, limit: int | None = None) -> ExpansionResult:
    """min |maximum matching in the edge boundary of X| / |X|."""

    def ratio(c: Cut, xs: tuple[int, ...]) -> Fraction:
        m = boundary_matching(g, c.x)
        return Fraction(m.size, len(xs))

    return _minimize(g, ratio, limit)


def cheeger_constant(g: Graph, limit: int | None = None) -> ExpansionResult:
    """min |boundary edges of X| / (total degree of X)."""

    def ratio(c: Cut, xs: tuple[int, ...]) -> Fraction:
        vol = sum(g.degrees[v] for v in xs)
        return Fraction(len(c.boundary_edges), vol)

    return _minimize(g, ratio, limit)


@dataclass(frozen=True)
class ExpansionSummary:
    c: ExpansionResult
    h: ExpansionResult
    m: ExpansionResult
    h_g: ExpansionResult


def expansion_summary(g: Graph, limit: int | None = None) -> ExpansionSummary:
    return ExpansionSummary(
        c=vertex_expansion(g, limit),
        h=edge_expansion(g, limit),
        m=matching_expansion(g, limit),
        h_g=cheeger_constant(g, limit),
    )


# ---------------------------------------------------------------------------
# inequality checks


@dataclass(frozen=True)
class CheegerReport:
    spectral_gap: float
    h_g: Fraction
    holds: bool


def check_cheeger(g: Graph, limit: int | None = None, tol: float = 1e-9) -> CheegerReport:
    """Verify 2*h_G >= gap > h_G^2 / 2 on this graph."""
    lam = spectral_gap(g)
    hg = cheeger_constant(g, limit).value
    upper = 2.0 * float(hg) >= lam - tol
    lower = lam > float(hg) ** 2 / 2.0 - tol
    return CheegerReport(lam, hg, upper and lower)


@dataclass(frozen=True)
class MatchingVertexReport:
    c: Fraction
    m: Fraction
    holds: bool


def check_matching_vertex_equivalence(
    g: Graph, limit: int | None = None
) -> MatchingVertexReport:
    """Verify m <= c and, unless m = 1, c <= 2m / (1 - m). Exact arithmetic."""
    c_val = vertex_expansion(g, limit).value
    m_val = matching_expansion(g, limit).value
    ok = m_val <= c_val
    if m_val != 1:
        ok = ok and c_val <= 2 * m_val / (1 - m_val)
    return MatchingVertexReport(c_val, m_val, ok)
