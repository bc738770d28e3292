"""The round-synchronous local Glauber dynamics and a sequential baseline.

One round: every node independently marks itself with probability gamma
and, if marked, proposes a uniformly random color. A marked node adopts
its proposal only when (i) the proposal avoids every neighbor's current
color and effective proposal, and (ii) no marked neighbor proposes the
node's own current color; everyone else keeps their color. Unmarked nodes
act as if they proposed their current color, which is what condition (i)
checks against; extending condition (ii) to those implicit proposals
would only add the constraint "no unmarked neighbor shares my color",
which never binds on a proper coloring.

All decisions in a round read the round-start state, so the update is a
pure function of (state, round randomness) and node evaluation order is
irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError
from .graph import Graph

# Documented fixed default; never derived from the clock.
DEFAULT_SEED = 12345

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ChainConfig:
    """Parameters of one dynamics instance: colors q, marking probability gamma, RNG seed."""

    q: int
    gamma: float
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError(f"q must be >= 1, got {self.q}")
        if not 0.0 < self.gamma < 1.0:
            raise ParameterError(f"gamma must lie in (0,1), got {self.gamma}")

    def alpha(self, g: Graph) -> float:
        """Color-to-degree ratio q / max_degree for the given graph."""
        if g.max_degree == 0:
            raise ParameterError("alpha undefined for edgeless graphs")
        return self.q / g.max_degree


@dataclass(frozen=True)
class RoundRandomness:
    """Per-node randomness of one round.

    marked[v] is True with marginal probability gamma; proposal[v] is
    uniform on [0,q) and only meaningful when marked[v]. All entries are
    mutually independent.
    """

    marked: np.ndarray
    proposal: np.ndarray


def draw_round_randomness(cfg: ChainConfig, n: int, round_index: int) -> RoundRandomness:
    """Counter-based randomness for one round.

    A Philox stream keyed on (seed, round_index) yields the whole round in
    one block, so the result depends only on (seed, node id, round) and is
    identical under any iteration order or thread schedule.
    """
    if round_index < 0:
        raise ParameterError("round_index must be >= 0")
    key = np.array([cfg.seed & _MASK64, round_index & _MASK64], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    marked = rng.random(n) < cfg.gamma
    proposal = rng.integers(0, cfg.q, size=n, dtype=np.int64)
    return RoundRandomness(marked=marked, proposal=proposal)


def effective_proposal(x: np.ndarray, rr: RoundRandomness, v: int) -> int:
    """A node's proposal if marked, else its current color (footnote rule)."""
    return int(rr.proposal[v]) if rr.marked[v] else int(x[v])


def effective_proposals(x: np.ndarray, marked: np.ndarray, proposal: np.ndarray) -> np.ndarray:
    return np.where(marked, proposal, x)


def apply_proposals(
    g: Graph,
    x: np.ndarray,
    marked: np.ndarray,
    proposal: np.ndarray,
    *,
    enforce_reversibility_condition: bool = True,
):
    """Resolve one round of proposals; returns (new_colors, accepted_mask).

    A marked node v with proposal c_v is accepted iff for every neighbor u
    (e_u being u's effective proposal: its own proposal when marked, else
    its current color):
        (i)  c_v != x[u]  and  c_v != e_u
        (ii) if u is marked: c_u != x[v]
    Condition (ii) rejects moves whose reverse move condition (i) would
    block, which is what makes the chain reversible on proper colorings;
    the `enforce_reversibility_condition` switch exists only so tests can
    demonstrate that dropping it breaks detailed balance. Production code
    must leave it True.
    """
    eff = np.where(marked, proposal, x)
    src, dst = g.edge_src, g.edge_dst
    ok = (proposal[src] != x[dst]) & (proposal[src] != eff[dst])
    if enforce_reversibility_condition:
        ok &= ~(marked[dst] & (proposal[dst] == x[src]))
    blocked = np.zeros(g.node_count, dtype=bool)
    blocked[src[~ok]] = True
    accepted = marked & ~blocked
    return np.where(accepted, proposal, x), accepted


def local_glauber_step(
    g: Graph,
    x: np.ndarray,
    rr: RoundRandomness,
    *,
    enforce_reversibility_condition: bool = True,
) -> np.ndarray:
    """One synchronous round; returns the next coloring."""
    new_x, _ = apply_proposals(
        g, x, rr.marked, rr.proposal,
        enforce_reversibility_condition=enforce_reversibility_condition,
    )
    return new_x


@dataclass(frozen=True)
class RoundStats:
    round_index: int
    marked: int
    accepted: int
    conflicts: int
    proper: bool


def run_chain(g: Graph, cfg: ChainConfig, x0: np.ndarray, rounds: int) -> np.ndarray:
    """Iterate the dynamics for `rounds` rounds from x0 (deterministic in cfg.seed)."""
    if rounds < 0:
        raise ParameterError("rounds must be >= 0")
    validate_coloring(g, cfg.q, x0)
    x = np.array(x0, dtype=np.int64)
    for t in range(rounds):
        rr = draw_round_randomness(cfg, g.node_count, t)
        x = local_glauber_step(g, x, rr)
    return x


def run_chain_trace(g: Graph, cfg: ChainConfig, x0: np.ndarray, rounds: int):
    """Like run_chain but also collects per-round summary statistics."""
    if rounds < 0:
        raise ParameterError("rounds must be >= 0")
    validate_coloring(g, cfg.q, x0)
    x = np.array(x0, dtype=np.int64)
    trace: list[RoundStats] = []
    for t in range(rounds):
        rr = draw_round_randomness(cfg, g.node_count, t)
        x, accepted = apply_proposals(g, x, rr.marked, rr.proposal)
        n_marked = int(rr.marked.sum())
        n_accepted = int(accepted.sum())
        trace.append(
            RoundStats(
                round_index=t,
                marked=n_marked,
                accepted=n_accepted,
                conflicts=n_marked - n_accepted,
                proper=is_proper(g, x),
            )
        )
    return x, trace


def sequential_glauber_step(g: Graph, q: int, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Classical single-site heat-bath update, for baseline comparisons.

    Picks a uniform node and resamples its color uniformly from the colors
    not currently used by its neighbors. Requires q > max_degree so that
    the available set is never empty.
    """
    v = int(rng.integers(g.node_count))
    taken = {int(x[u]) for u in g.adjacency[v]}
    avail = [c for c in range(q) if c not in taken]
    if not avail:
        raise ParameterError(f"node {v} has no available color (need q > max_degree)")
    out = np.array(x, dtype=np.int64)
    out[v] = avail[int(rng.integers(len(avail)))]
    return out


def is_proper(g: Graph, x: np.ndarray) -> bool:
    """True iff no edge is monochromatic."""
    if g.edge_src.size == 0:
        return True
    return bool(np.all(x[g.edge_src] != x[g.edge_dst]))


def validate_coloring(g: Graph, q: int, x: np.ndarray) -> None:
    x = np.asarray(x)
    if x.shape != (g.node_count,):
        raise ValidationError(f"coloring length {x.shape} != node count {g.node_count}")
    if x.size and (x.min() < 0 or x.max() >= q):
        raise ValidationError(f"colors outside [0,{q})")


def zeros_coloring(g: Graph) -> np.ndarray:
    """Default start: every node color 0 (improper on any graph with an edge)."""
    return np.zeros(g.node_count, dtype=np.int64)


def random_coloring(g: Graph, q: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, q, size=g.node_count, dtype=np.int64)


def greedy_coloring(g: Graph, q: int) -> np.ndarray:
    """First-fit proper coloring; needs q >= max_degree + 1 in the worst case."""
    x = np.full(g.node_count, -1, dtype=np.int64)
    for v in range(g.node_count):
        taken = {int(x[u]) for u in g.adjacency[v] if x[u] >= 0}
        for c in range(q):
            if c not in taken:
                x[v] = c
                break
        else:
            raise ParameterError(f"greedy coloring failed at node {v} with q={q}")
    return x
