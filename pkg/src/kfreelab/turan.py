"""Exact Turán numbers, Turán graphs, and the multipartite variant.

For a complete r-partite host K(n_1,...,n_r) with sorted class sizes, the
maximum number of edges of a K_r-free subgraph is e(host) - n_1*n_2, and
an extremal subgraph is the host minus all edges between the two smallest
classes.  A branch-and-bound brute-force oracle over edge subsets is kept
alongside for verification on hosts with few edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DomainError, SizeError, UnsupportedCaseError
from .graph_core import LabeledGraph, contains_clique

__all__ = [
    "MultipartiteHost",
    "ex_turan",
    "turan_graph",
    "ex_multipartite",
    "extremal_multipartite_graph",
    "brute_force_ex",
]

_BRUTE_EDGE_BUDGET = 24
_EXHAUSTIVE_EDGE_BUDGET = 13


def balanced_sizes(n: int, r: int) -> Tuple[int, ...]:
    """Class sizes of the balanced complete r-partite graph on n vertices
    (n mod r classes of size ceil(n/r), the rest floor(n/r))."""
    if r < 1:
        raise DomainError(f"r={r}: need at least one class")
    q, rem = divmod(n, r)
    return tuple([q + 1] * rem + [q] * (r - rem))


def ex_turan(n: int, k: int) -> int:
    """Max edges of a K_k-free graph on n vertices: e of the balanced
    complete (k-1)-partite graph."""
    if k < 2:
        raise DomainError(f"k={k}: the forbidden clique K_k needs k >= 2")
    if n < 0:
        raise DomainError(f"n={n}: vertex count cannot be negative")
    sizes = balanced_sizes(n, k - 1)
    return math.comb(n, 2) - sum(math.comb(s, 2) for s in sizes)


def turan_graph(n: int, r: int) -> LabeledGraph:
    """The balanced complete r-partite graph, vertex v in class v mod r."""
    if r < 1:
        raise DomainError(f"r={r}: need at least one class")
    if n < 1:
        raise DomainError(f"n={n}: need at least one vertex")
    pairs = [
        (u, v) for u in range(n - 1) for v in range(u + 1, n) if u % r != v % r
    ]
    return LabeledGraph.from_edge_list(n, pairs)


@dataclass(frozen=True)
class MultipartiteHost:
    """Class sizes of a complete r-partite host, sorted ascending on entry."""

    sizes: Tuple[int, ...]

    def __init__(self, sizes):
        object.__setattr__(self, "sizes", tuple(sorted(sizes)))
        if len(self.sizes) < 2:
            raise DomainError(f"sizes={self.sizes}: need r >= 2 classes")
        if any(s < 1 for s in self.sizes):
            raise DomainError(f"sizes={self.sizes}: every class needs >= 1 vertex")

    @property
    def r(self) -> int:
        return len(self.sizes)

    def total_vertices(self) -> int:
        return sum(self.sizes)

    def edge_count(self) -> int:
        s = self.sizes
        return sum(s[i] * s[j] for i in range(len(s)) for j in range(i + 1, len(s)))

    def complete_graph(self) -> LabeledGraph:
        """The complete r-partite host itself, classes as consecutive blocks."""
        n = self.total_vertices()
        cls = []
        for i, s in enumerate(self.sizes):
            cls.extend([i] * s)
        pairs = [
            (u, v) for u in range(n - 1) for v in range(u + 1, n) if cls[u] != cls[v]
        ]
        return LabeledGraph.from_edge_list(n, pairs)


def ex_multipartite(host: MultipartiteHost, forbid_k: Optional[int] = None) -> int:
    """Max edges of a K_r-free subgraph of the complete r-partite host:
    e(host) - n_1*n_2 with n_1 <= n_2 the two smallest classes.

    Only the forbid_k = r case is supported; anything else is rejected
    rather than silently extrapolated.
    """
    r = host.r
    if forbid_k is None:
        forbid_k = r
    if forbid_k != r:
        raise UnsupportedCaseError(
            f"forbid_k={forbid_k}: only the K_r-in-r-partite case (forbid_k={r}) is supported"
        )
    return host.edge_count() - host.sizes[0] * host.sizes[1]


def extremal_multipartite_graph(host: MultipartiteHost) -> LabeledGraph:
    """Complete r-partite host minus every edge between the two smallest
    classes; K_r-free with exactly ex_multipartite(host) edges."""
    n = host.total_vertices()
    cls = []
    for i, s in enumerate(host.sizes):
        cls.extend([i] * s)
    pairs = [
        (u, v)
        for u in range(n - 1)
        for v in range(u + 1, n)
        if cls[u] != cls[v] and {cls[u], cls[v]} != {0, 1}
    ]
    g = LabeledGraph.from_edge_list(n, pairs)
    assert g.edge_count == ex_multipartite(host)
    return g


def brute_force_ex(host_graph: LabeledGraph, k: int, exhaustive: bool = False) -> int:
    """Maximum edge count of a K_k-free subgraph of host_graph.

    Depth-first over edge subsets with branch-and-bound (include-branch
    first so the incumbent rises quickly; prune when the remaining edges
    cannot beat it).  With exhaustive=True every subset is scanned instead,
    which is only allowed for hosts with at most 13 edges.
    """
    if k < 2:
        raise DomainError(f"k={k}: the forbidden clique K_k needs k >= 2")
    edges = host_graph.edge_list()
    budget = _EXHAUSTIVE_EDGE_BUDGET if exhaustive else _BRUTE_EDGE_BUDGET
    if len(edges) > budget:
        raise SizeError(
            f"host has {len(edges)} edges, over the budget {budget}"
            f"{' (exhaustive mode)' if exhaustive else ''}"
        )
    n = host_graph.n

    if exhaustive:
        best = 0
        for sub in range(1 << len(edges)):
            if sub.bit_count() <= best:
                continue
            g = LabeledGraph.from_edge_list(
                n, [e for i, e in enumerate(edges) if sub >> i & 1]
            )
            if not contains_clique(g, k):
                best = sub.bit_count()
        return best

    adj = [0] * n  # adjacency of the chosen subgraph, mutated along the DFS
    best = 0

    def completes_clique(u: int, v: int) -> bool:
        # does adding u-v to the chosen subgraph create a K_k?
        def rec(cand: int, need: int) -> bool:
            if need == 0:
                return True
            while cand:
                if cand.bit_count() < need:
                    return False
                low = cand & -cand
                cand ^= low
                if rec(cand & adj[low.bit_length() - 1], need - 1):
                    return True
            return False

        return rec(adj[u] & adj[v], k - 2)

    def dfs(i: int, chosen: int) -> None:
        nonlocal best
        if chosen + (len(edges) - i) <= best:
            return
        if i == len(edges):
            best = chosen
            return
        u, v = edges[i]
        if not completes_clique(u, v):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            dfs(i + 1, chosen + 1)
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        dfs(i + 1, chosen)

    dfs(0, 0)
    return best
