"""Simple undirected graphs: representation, generators, and edge-list I/O.

Nodes are dense integers ``0..n-1`` so that colorings can live in flat
numpy arrays. Graphs are immutable after construction and safe to share.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError, ParseError, ValidationError

GENERATOR_FAMILIES = ("cycle", "path", "complete", "star", "grid2d", "erdos_renyi")


class Graph:
    """Undirected simple graph over nodes ``0..n-1``.

    Attributes:
        node_count: number of nodes n.
        adjacency: tuple of sorted neighbor tuples, one per node.
        max_degree: largest adjacency-list length (0 for edgeless graphs).
        edge_src, edge_dst: aligned int64 arrays listing every directed
            orientation of every edge; used by the vectorized dynamics.
    """

    __slots__ = ("node_count", "adjacency", "max_degree", "edge_src", "edge_dst")

    def __init__(self, node_count: int, edges) -> None:
        if node_count < 1:
            raise ParameterError(f"node_count must be >= 1, got {node_count}")
        neighbor_sets: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"self-loop at node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValidationError(f"edge ({u},{v}) outside [0,{node_count})")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        self.node_count = node_count
        self.adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)
        self.max_degree = max((len(s) for s in neighbor_sets), default=0)
        src, dst = [], []
        for u, nbrs in enumerate(self.adjacency):
            src.extend([u] * len(nbrs))
            dst.extend(nbrs)
        self.edge_src = np.asarray(src, dtype=np.int64)
        self.edge_dst = np.asarray(dst, dtype=np.int64)

    @property
    def edge_count(self) -> int:
        return len(self.edge_src) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edge list with u < v, sorted."""
        return [(u, v) for u in range(self.node_count) for v in self.adjacency[u] if u < v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count}, max_degree={self.max_degree})"


def neighbors_inclusive(g: Graph, v: int) -> set[int]:
    """The closed neighborhood N(v) together with v itself."""
    if not (0 <= v < g.node_count):
        raise IndexError(f"node {v} out of range [0,{g.node_count})")
    return set(g.adjacency[v]) | {v}


def validate_graph(g: Graph) -> None:
    """Full-scan check of the symmetry / simplicity / max-degree invariants."""
    n = g.node_count
    for u in range(n):
        nbrs = g.adjacency[u]
        if len(set(nbrs)) != len(nbrs):
            raise ValidationError(f"duplicate neighbor in adjacency of {u}")
        if u in nbrs:
            raise ValidationError(f"self-loop at {u}")
        for v in nbrs:
            if u not in g.adjacency[v]:
                raise ValidationError(f"asymmetric edge ({u},{v})")
    if g.max_degree != max((len(a) for a in g.adjacency), default=0):
        raise ValidationError("max_degree out of sync with adjacency")


def generate(family: str, seed: int = 0, **params) -> Graph:
    """Deterministically build a test-family graph.

    Supported families and their parameters:
        cycle(n>=3), path(n>=1), complete(n>=1), star(n>=1, center 0),
        grid2d(rows>=1, cols>=1), erdos_renyi(n>=1, p in [0,1]).

    The result is a pure function of (family, params, seed); only
    erdos_renyi consumes the seed.
    """
    if family == "cycle":
        n = _size(params, "n")
        if n < 3:
            raise ParameterError("cycle needs n >= 3")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if family == "path":
        n = _size(params, "n")
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if family == "complete":
        n = _size(params, "n")
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if family == "star":
        n = _size(params, "n")
        return Graph(n, [(0, i) for i in range(1, n)])
    if family == "grid2d":
        rows = _size(params, "rows")
        cols = _size(params, "cols")
        idx = lambda r, c: r * cols + c
        edges = []
        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols:
                    edges.append((idx(r, c), idx(r, c + 1)))
                if r + 1 < rows:
                    edges.append((idx(r, c), idx(r + 1, c)))
        return Graph(rows * cols, edges)
    if family == "erdos_renyi":
        n = _size(params, "n")
        p = float(params.get("p", -1.0))
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"erdos_renyi needs p in [0,1], got {p}")
        rng = np.random.Generator(np.random.Philox(key=np.array([seed & _MASK64, 0], dtype=np.uint64)))
        edges = []
        for i in range(n):
            draw = rng.random(n - i - 1)
            for off, j in enumerate(range(i + 1, n)):
                if draw[off] < p:
                    edges.append((i, j))
        return Graph(n, edges)
    raise ParameterError(f"unknown family {family!r}; expected one of {GENERATOR_FAMILIES}")


_MASK64 = (1 << 64) - 1


def _size(params, key) -> int:
    try:
        value = int(params[key])
    except KeyError:
        raise ParameterError(f"missing parameter {key!r}") from None
    except (TypeError, ValueError):
        raise ParameterError(f"parameter {key!r} must be an integer") from None
    if value < 1:
        raise ParameterError(f"parameter {key!r} must be >= 1, got {value}")
    return value


def parse_edge_list(text, remap_sparse_ids: bool = False):
    """Parse whitespace-separated "u v" lines into a Graph.

    Blank lines and lines starting with '#' are ignored; duplicate edges
    collapse; self-loops are rejected. Node count is 1 + max id seen, so
    ids absent from the file become isolated nodes.

    With remap_sparse_ids=True, ids are compacted to 0..n-1 in first-seen
    order and the return value is (graph, mapping) where mapping[original]
    gives the dense id.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    edges: list[tuple[int, int]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two tokens, got {len(parts)}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", line=lineno) from None
        if u < 0 or v < 0:
            raise ParseError("negative node id", line=lineno)
        if u == v:
            raise ValidationError(f"self-loop at node {u} (line {lineno})")
        edges.append((u, v))
        max_id = max(max_id, u, v)
    if remap_sparse_ids:
        mapping: dict[int, int] = {}
        for u, v in edges:
            for w in (u, v):
                if w not in mapping:
                    mapping[w] = len(mapping)
        dense = [(mapping[u], mapping[v]) for u, v in edges]
        return Graph(max(len(mapping), 1), dense), mapping
    return Graph(max_id + 1 if max_id >= 0 else 1, edges)


def cycle_automorphisms(n: int) -> list[np.ndarray]:
    """All 2n dihedral node permutations of the n-cycle (as index arrays)."""
    base = np.arange(n)
    perms = []
    for shift in range(n):
        rot = (base + shift) % n
        perms.append(rot)
        perms.append(rot[::-1].copy())
    return perms
