"""Brute-force ground truth on tiny instances.

Enumerates all q^n colorings of a small graph, builds the exact one-round
transition matrix of the local Glauber dynamics by summing over every
(marking, proposal) combination, and derives detailed-balance /
stationarity / absorption reports, total-variation curves, and exact
mixing times from it.

State indexing is the base-q encoding of the color vector with node 0 as
the least significant digit, so index 0 is the all-zeros coloring.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .dynamics import ChainConfig
from .errors import ParameterError, ResourceLimitError, ValidationError
from .graph import Graph

DEFAULT_ENUMERATION_CAP_BITS = 24.0   # allow q^n states up to 2^24
DEFAULT_MATRIX_ENTRY_CAP = 2 ** 24    # allow q^n * q^n matrix entries up to 2^24


class StateSpace:
    """All q^n colorings of a graph, with a properness mask."""

    def __init__(self, graph: Graph, q: int, cap_bits: float = DEFAULT_ENUMERATION_CAP_BITS):
        if q < 1:
            raise ParameterError(f"q must be >= 1, got {q}")
        n = graph.node_count
        if n * math.log2(q) > cap_bits and q > 1:
            raise ResourceLimitError(
                f"q^n = {q}^{n} exceeds the enumeration budget of 2^{cap_bits:g} states"
            )
        self.graph = graph
        self.q = q
        self.size = q ** n
        self.q_powers = q ** np.arange(n, dtype=np.int64)
        # states[s, v] = color of node v in the coloring with index s
        idx = np.arange(self.size, dtype=np.int64)
        self.states = (idx[:, None] // self.q_powers[None, :]) % q
        self.states = self.states.astype(np.int16)
        self.proper_mask = np.ones(self.size, dtype=bool)
        for u, v in graph.edges():
            self.proper_mask &= self.states[:, u] != self.states[:, v]
        self.proper_indices = np.flatnonzero(self.proper_mask)

    def index_of(self, coloring) -> int:
        coloring = np.asarray(coloring, dtype=np.int64)
        return int(coloring @ self.q_powers)

    def coloring_of(self, index: int) -> np.ndarray:
        return self.states[index].astype(np.int64)

    @property
    def proper_count(self) -> int:
        return int(self.proper_mask.sum())


def enumerate_proper_colorings(g: Graph, q: int, cap_bits: float = DEFAULT_ENUMERATION_CAP_BITS):
    """All proper q-colorings in index order; returns (array of colorings, count)."""
    space = StateSpace(g, q, cap_bits=cap_bits)
    proper = space.states[space.proper_mask].astype(np.int64)
    return proper, len(proper)


def build_transition_matrix(
    g: Graph,
    cfg: ChainConfig,
    *,
    entry_cap: int = DEFAULT_MATRIX_ENTRY_CAP,
    cap_bits: float = DEFAULT_ENUMERATION_CAP_BITS,
    enforce_reversibility_condition: bool = True,
) -> np.ndarray:
    """Exact dense one-round transition matrix, rows indexed like StateSpace.

    Sums over all 2^n markings and q^|M| proposal vectors, weighting each by
    gamma^|M| (1-gamma)^(n-|M|) q^(-|M|) and applying the acceptance rule
    deterministically. The rule is the same as dynamics.apply_proposals
    (including the test-only reversibility switch); the equivalence is
    pinned by tests rather than by sharing the inner loop, which here is
    vectorized over all states at once.
    """
    space = StateSpace(g, cfg.q, cap_bits=cap_bits)
    Q = space.size
    if Q * Q > entry_cap:
        raise ResourceLimitError(
            f"transition matrix needs {Q}x{Q} = {Q * Q} entries, over the cap of {entry_cap}"
        )
    P = np.zeros(Q * Q, dtype=np.float64)
    n = g.node_count
    q, gamma = cfg.q, cfg.gamma
    row_base = np.arange(Q, dtype=np.int64) * Q
    diag = row_base + np.arange(Q, dtype=np.int64)

    # Reusable per-node tables: neq[v][c] = (state color at v) != c, and
    # color deltas scaled by the positional weight q^v.
    cols = [space.states[:, v].astype(np.int64) for v in range(n)]
    neq = [[cols[v] != c for c in range(q)] for v in range(n)]
    cdelta = [[(c - cols[v]) * space.q_powers[v] for c in range(q)] for v in range(n)]

    for mask in range(1 << n):
        marked = [v for v in range(n) if mask >> v & 1]
        k = len(marked)
        w = gamma ** k * (1.0 - gamma) ** (n - k) / q ** k
        if k == 0:
            P[diag] += w
            continue
        marked_set = set(marked)
        for prop in itertools.product(range(q), repeat=k):
            c_of = dict(zip(marked, prop))
            shift = None
            for v, c_v in zip(marked, prop):
                acc = None
                rejected = False
                for u in g.adjacency[v]:
                    # (i): proposal avoids u's current color and effective proposal
                    acc = neq[u][c_v] if acc is None else acc & neq[u][c_v]
                    if u in marked_set:
                        c_u = c_of[u]
                        if c_u == c_v:
                            rejected = True
                            break
                        # (ii): marked neighbor must not propose v's current color
                        if enforce_reversibility_condition:
                            acc = acc & neq[v][c_u]
                if rejected:
                    continue
                move = cdelta[v][c_v] if acc is None else cdelta[v][c_v] * acc
                shift = move if shift is None else shift + move
            if shift is None:
                P[diag] += w
            else:
                P[diag + shift] += w
    return P.reshape(Q, Q)


@dataclass
class CheckReport:
    name: str
    passed: bool
    max_error: float
    detail: str = ""

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"{self.name}: {status} (max_error={self.max_error:.3e}) {self.detail}".rstrip()


def check_detailed_balance(P: np.ndarray, space: StateSpace, tol: float = 1e-12) -> CheckReport:
    """P must be symmetric on proper-proper index pairs (uniform detailed balance)."""
    idx = space.proper_indices
    sub = P[np.ix_(idx, idx)]
    err = float(np.abs(sub - sub.T).max()) if len(idx) else 0.0
    return CheckReport("detailed_balance", err <= tol, err)


def check_uniform_stationary(P: np.ndarray, space: StateSpace, tol: float = 1e-12) -> CheckReport:
    """mu P = mu for mu uniform on proper colorings."""
    mu = stationary_uniform(space)
    err = float(np.abs(mu @ P - mu).max())
    return CheckReport("uniform_stationary", err <= tol, err)


def check_absorption(P: np.ndarray, space: StateSpace) -> CheckReport:
    """No probability flows from a proper to an improper coloring."""
    proper = space.proper_indices
    improper = np.flatnonzero(~space.proper_mask)
    if len(proper) == 0 or len(improper) == 0:
        return CheckReport("absorption", True, 0.0, "vacuous")
    err = float(P[np.ix_(proper, improper)].max())
    return CheckReport("absorption", err == 0.0, err)


def check_irreducibility(P: np.ndarray, space: StateSpace) -> CheckReport:
    """Strong connectivity of the positive-transition digraph on proper states.

    Reported, not assumed: expected to hold for q >= max_degree + 2.
    """
    idx = space.proper_indices
    if len(idx) == 0:
        return CheckReport("irreducible_on_proper", False, 0.0, "no proper colorings")
    sub = P[np.ix_(idx, idx)] > 0.0
    ncomp, _ = connected_components(csr_matrix(sub), directed=True, connection="strong")
    return CheckReport("irreducible_on_proper", ncomp == 1, float(ncomp - 1), f"{ncomp} strong component(s)")


def check_row_stochastic(P: np.ndarray, tol: float = 1e-12) -> CheckReport:
    err = float(np.abs(P.sum(axis=1) - 1.0).max())
    return CheckReport("row_stochastic", err <= tol, err)


def stationary_uniform(space: StateSpace) -> np.ndarray:
    """Uniform distribution over proper colorings, zero elsewhere."""
    count = space.proper_count
    if count == 0:
        raise ValidationError("graph has no proper coloring with this q")
    mu = np.zeros(space.size)
    mu[space.proper_indices] = 1.0 / count
    return mu


def tv_distance(mu: np.ndarray, nu: np.ndarray) -> float:
    """Total variation distance (half the L1 distance) between distributions."""
    mu = np.asarray(mu, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    if mu.shape != nu.shape:
        raise ValidationError(f"distribution shapes differ: {mu.shape} vs {nu.shape}")
    for name, d in (("mu", mu), ("nu", nu)):
        s = d.sum()
        if abs(s - 1.0) > 1e-9:
            raise ValidationError(f"{name} sums to {s}, not 1 within 1e-9")
    return 0.5 * float(np.abs(mu - nu).sum())


@dataclass
class TVCurve:
    """Exact TV-to-stationary trajectories from a set of point-mass starts."""

    start_indices: np.ndarray
    rounds: np.ndarray            # 0..T
    per_start: np.ndarray         # shape (len(start_indices), T+1)
    max_tv: np.ndarray = field(init=False)

    def __post_init__(self):
        self.max_tv = self.per_start.max(axis=0)

    def tv_from_start(self, index: int) -> np.ndarray:
        pos = np.flatnonzero(self.start_indices == index)
        if len(pos) == 0:
            raise KeyError(f"start index {index} not tracked")
        return self.per_start[pos[0]]


def tv_curve(
    P: np.ndarray,
    space: StateSpace,
    starts=None,
    max_rounds: int = 10_000,
    stop_tv: float | None = None,
) -> TVCurve:
    """Evolve point masses by repeated vector-matrix products and record TV.

    `starts` defaults to every state; to remain exact on larger instances,
    pass the output of symmetry_reduced_starts (TV from a start is constant
    on symmetry orbits, so orbit representatives realize the same maximum).
    """
    if starts is None:
        starts = np.arange(space.size)
    starts = np.asarray(starts, dtype=np.int64)
    mu = stationary_uniform(space)
    V = np.zeros((len(starts), space.size))
    V[np.arange(len(starts)), starts] = 1.0
    tv_rows = [0.5 * np.abs(V - mu).sum(axis=1)]
    t = 0
    while t < max_rounds:
        if stop_tv is not None and tv_rows[-1].max() <= stop_tv:
            break
        V = V @ P
        tv_rows.append(0.5 * np.abs(V - mu).sum(axis=1))
        t += 1
    per_start = np.stack(tv_rows, axis=1)
    return TVCurve(start_indices=starts, rounds=np.arange(per_start.shape[1]), per_start=per_start)


@dataclass
class MixingResult:
    eps: float
    rounds: int | None            # None when max_rounds was exceeded
    exceeded: bool
    curve: TVCurve


def exact_mixing_time(
    P: np.ndarray,
    space: StateSpace,
    eps: float,
    max_rounds: int = 10_000,
    starts=None,
    curve: TVCurve | None = None,
) -> MixingResult:
    """Smallest t with max-over-starts TV(sigma P^t, uniform-proper) <= eps.

    Accepts a precomputed TVCurve so several eps thresholds can share one
    evolution. Exceeding max_rounds is reported, not raised.
    """
    if not 0.0 < eps:
        raise ParameterError(f"eps must be positive, got {eps}")
    if curve is None:
        curve = tv_curve(P, space, starts=starts, max_rounds=max_rounds, stop_tv=eps)
    hit = np.flatnonzero(curve.max_tv <= eps)
    if len(hit) == 0:
        return MixingResult(eps=eps, rounds=None, exceeded=True, curve=curve)
    return MixingResult(eps=eps, rounds=int(hit[0]), exceeded=False, curve=curve)


def improper_mass_curve(P: np.ndarray, space: StateSpace, start_index: int, rounds: int) -> np.ndarray:
    """Total probability mass on improper states after each round from one start."""
    nu = np.zeros(space.size)
    nu[start_index] = 1.0
    improper = ~space.proper_mask
    masses = [float(nu[improper].sum())]
    for _ in range(rounds):
        nu = nu @ P
        masses.append(float(nu[improper].sum()))
    return np.asarray(masses)


def _color_pattern(colors) -> tuple:
    """Canonical relabeling: colors renamed by order of first appearance."""
    relabel: dict[int, int] = {}
    out = []
    for c in colors:
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return tuple(out)


def symmetry_reduced_starts(space: StateSpace, node_automorphisms) -> np.ndarray:
    """One start state per orbit of the (graph automorphism x color relabeling) group.

    The dynamics commutes with node automorphisms and color permutations,
    and the uniform-proper target is invariant under both, so the TV curve
    from a start depends only on its orbit; the returned representatives
    realize the exact maximum over all q^n starts.
    """
    perms = [np.asarray(p, dtype=np.int64) for p in node_automorphisms]
    if not perms:
        perms = [np.arange(space.graph.node_count, dtype=np.int64)]
    reps: dict[tuple, int] = {}
    for idx in range(space.size):
        colors = space.states[idx]
        canon = min(_color_pattern(colors[p]) for p in perms)
        if canon not in reps:
            reps[canon] = idx
    return np.asarray(sorted(reps.values()), dtype=np.int64)
