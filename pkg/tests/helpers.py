"""Shared test utilities, including an independent reference implementation
of the synchronous round used as an oracle against the vectorized one."""

import numpy as np


def reference_round(g, x, marked, proposal, order=None, enforce=True):
    """Plain-loop re-derivation of one round from the update rule.

    Iterates nodes in an arbitrary `order` (the result must not depend on
    it), reading only round-start state: node v with proposal c accepts iff
    every neighbor u satisfies c != x[u], c != eff[u], and, when enforce is
    set, marked u does not propose x[v].
    """
    n = g.node_count
    if order is None:
        order = range(n)
    eff = [proposal[v] if marked[v] else x[v] for v in range(n)]
    out = list(x)
    for v in order:
        if not marked[v]:
            continue
        c = proposal[v]
        ok = True
        for u in g.adjacency[v]:
            if c == x[u] or c == eff[u]:
                ok = False
                break
            if enforce and marked[u] and proposal[u] == x[v]:
                ok = False
                break
        if ok:
            out[v] = c
    return np.asarray(out, dtype=np.int64)


def random_graph_and_coloring(rng, n_max=12, q_max=7, proper=False):
    """A random ER graph with either a greedy-proper or arbitrary coloring."""
    from localglauber import generate, greedy_coloring

    n = int(rng.integers(2, n_max + 1))
    p = float(rng.uniform(0.1, 0.6))
    g = generate("erdos_renyi", n=n, p=p, seed=int(rng.integers(2**31)))
    if proper:
        q = g.max_degree + 1 + int(rng.integers(0, 3))
        x = greedy_coloring(g, q)
    else:
        q = int(rng.integers(2, q_max + 1))
        x = rng.integers(0, q, size=n)
    return g, q, np.asarray(x, dtype=np.int64)
