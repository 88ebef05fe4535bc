"""Labeled graphs on a fixed vertex set, cliques, colorings, and partitions.

Graphs live on vertices 0..n-1 with n <= 32, stored as a single integer
bitmask over the C(n,2) vertex pairs in canonical order
(0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1), so neighbor sets fit in one
machine word and clique tests are bit-parallel.  The text literal format
"n;u-v,u-v,..." used by tests and the CLI is 1-based; the parser and
formatter convert.

A Partition assigns each vertex a class index in 0..r-1.  Viewing a
partition Pi as a complete r-partite graph, e(Pi) counts its cross pairs
and e(Pi^c) the within-class pairs; the two always add up to C(n,2).

All values are immutable after construction and every operation is a pure
function, so unrestricted concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import DomainError, SizeError

__all__ = [
    "MAX_VERTICES",
    "LabeledGraph",
    "Partition",
    "BalanceSpec",
    "pair_index",
    "pair_table",
    "parse_graph",
    "graph_literal",
    "contains_clique",
    "count_cliques",
    "is_r_colorable",
    "miscolored_edges",
    "min_miscolored_exact",
    "local_min_partition",
    "is_balanced",
    "enumerate_partitions",
]

MAX_VERTICES = 32

_ENUM_GUARD = 10**8  # cap on r**n for exhaustive coloring/partition scans


def pair_table(n: int) -> Tuple[Tuple[int, int], ...]:
    """All vertex pairs (i, j), i < j, in canonical slot order."""
    return tuple((i, j) for i in range(n - 1) for j in range(i + 1, n))


def pair_index(n: int, u: int, v: int) -> int:
    """Slot index of the pair {u, v} in the canonical order."""
    if u == v:
        raise DomainError(f"pair ({u},{v}): self-loops have no slot")
    if u > v:
        u, v = v, u
    if not (0 <= u and v < n):
        raise DomainError(f"pair ({u},{v}): vertex out of range for n={n}")
    # slots for pairs starting at i occupy a block of length n-1-i
    return u * n - u * (u + 1) // 2 + (v - u - 1)


class LabeledGraph:
    """An undirected labeled graph as an edge bitmask; immutable."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: int = 0):
        if not (1 <= n <= MAX_VERTICES):
            raise DomainError(f"n={n}: vertex count must be in 1..{MAX_VERTICES}")
        nslots = n * (n - 1) // 2
        if edges < 0 or edges >> nslots:
            raise DomainError(f"edges=0x{edges:x}: bitmask has bits beyond slot {nslots - 1}")
        self.n = n
        self.edges = edges
        self._adj: Optional[Tuple[int, ...]] = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_edge_list(cls, n: int, pairs: Sequence[Tuple[int, int]]) -> "LabeledGraph":
        mask = 0
        for u, v in pairs:
            bit = 1 << pair_index(n, u, v)
            if mask & bit:
                raise DomainError(f"edge ({u},{v}): duplicate edge")
            mask |= bit
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "LabeledGraph":
        return cls(n, (1 << (n * (n - 1) // 2)) - 1)

    # -- basic queries ---------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self.edges.bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.edges >> pair_index(self.n, u, v) & 1)

    def with_edge(self, u: int, v: int) -> "LabeledGraph":
        return LabeledGraph(self.n, self.edges | 1 << pair_index(self.n, u, v))

    def without_edge(self, u: int, v: int) -> "LabeledGraph":
        return LabeledGraph(self.n, self.edges & ~(1 << pair_index(self.n, u, v)))

    def edge_list(self) -> List[Tuple[int, int]]:
        pt = pair_table(self.n)
        mask = self.edges
        out = []
        while mask:
            low = mask & -mask
            out.append(pt[low.bit_length() - 1])
            mask ^= low
        return out

    def adjacency(self) -> Tuple[int, ...]:
        """Per-vertex neighbor bitmasks (cached after first call)."""
        if self._adj is None:
            adj = [0] * self.n
            for u, v in self.edge_list():
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            self._adj = tuple(adj)
        return self._adj

    def degree(self, v: int) -> int:
        return self.adjacency()[v].bit_count()

    # -- dunder plumbing --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LabeledGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"LabeledGraph({self.n}, edges=0x{self.edges:x})"


def parse_graph(literal: str) -> LabeledGraph:
    """Parse the 1-based text literal "n;u-v,u-v,..."; "n;" is the empty graph.

    Rejects self-loops and duplicate edges.
    """
    head, sep, body = literal.partition(";")
    if not sep:
        raise DomainError(f"graph literal {literal!r}: missing ';' separator")
    try:
        n = int(head)
    except ValueError:
        raise DomainError(f"graph literal {literal!r}: vertex count {head!r} is not an integer") from None
    pairs = []
    body = body.strip()
    if body:
        for tok in body.split(","):
            a, sep2, b = tok.partition("-")
            if not sep2:
                raise DomainError(f"graph literal token {tok!r}: expected 'u-v'")
            try:
                u, v = int(a), int(b)
            except ValueError:
                raise DomainError(f"graph literal token {tok!r}: endpoints must be integers") from None
            if u == v:
                raise DomainError(f"graph literal token {tok!r}: self-loop rejected")
            if not (1 <= u <= n and 1 <= v <= n):
                raise DomainError(f"graph literal token {tok!r}: vertex outside 1..{n}")
            pairs.append((u - 1, v - 1))
    return LabeledGraph.from_edge_list(n, pairs)


def graph_literal(g: LabeledGraph) -> str:
    """Inverse of parse_graph, edges in canonical slot order, 1-based."""
    body = ",".join(f"{u + 1}-{v + 1}" for u, v in g.edge_list())
    return f"{g.n};{body}"


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """An assignment of n vertices to r classes (classes may be empty)."""

    n: int
    r: int
    class_of: Tuple[int, ...]
    class_sizes: Tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.r < 1:
            raise DomainError(f"r={self.r}: need at least one class")
        if len(self.class_of) != self.n:
            raise DomainError(
                f"class_of has {len(self.class_of)} entries for n={self.n} vertices"
            )
        sizes = [0] * self.r
        for v, c in enumerate(self.class_of):
            if not (0 <= c < self.r):
                raise DomainError(f"vertex {v}: class index {c} outside 0..{self.r - 1}")
            sizes[c] += 1
        object.__setattr__(self, "class_sizes", tuple(sizes))

    def class_mask(self, c: int) -> int:
        mask = 0
        for v, cv in enumerate(self.class_of):
            if cv == c:
                mask |= 1 << v
        return mask

    def cross_pair_count(self) -> int:
        """e(Pi): pairs with endpoints in different classes."""
        return (self.n * self.n - sum(s * s for s in self.class_sizes)) // 2

    def within_pair_count(self) -> int:
        """e(Pi^c): pairs inside a class; complements cross_pair_count to C(n,2)."""
        return sum(s * (s - 1) // 2 for s in self.class_sizes)

    def cross_edge_mask(self) -> int:
        """Edge bitmask of the complete multipartite graph Pi."""
        mask = 0
        slot = 0
        co = self.class_of
        for i in range(self.n - 1):
            ci = co[i]
            for j in range(i + 1, self.n):
                if ci != co[j]:
                    mask |= 1 << slot
                slot += 1
        return mask


@dataclass(frozen=True)
class BalanceSpec:
    """Class-size band: every class within (1/r - gamma)n .. (1/r + gamma)n."""

    gamma: float

    def __post_init__(self) -> None:
        if not 0 < self.gamma < 1:
            raise DomainError(f"gamma={self.gamma}: need 0 < gamma < 1")


def is_balanced(p: Partition, spec: BalanceSpec) -> bool:
    """True iff every class size falls inside the band, endpoints included.

    Comparison is exact (the float gamma is converted to a rational), so
    boundary cases like n=10, r=2, sizes (4,6), gamma=0.1 are inclusive.
    """
    gamma = Fraction(spec.gamma)
    if gamma >= Fraction(1, p.r):
        raise DomainError(f"gamma={spec.gamma}: need gamma < 1/r = 1/{p.r}")
    lo = (Fraction(1, p.r) - gamma) * p.n
    hi = (Fraction(1, p.r) + gamma) * p.n
    return all(lo <= s <= hi for s in p.class_sizes)


def enumerate_partitions(n: int, r: int) -> Iterator[Partition]:
    """Every set-partition of [n] into at most r classes, exactly once.

    Canonical representative: vertex 0 in class 0, and each new class first
    used in increasing order (restricted-growth strings).  The number of
    partitions yielded equals sum_{k<=r} Stirling2(n, k).
    """
    if n < 1:
        raise DomainError(f"n={n}: need at least one vertex")
    if r < 1:
        raise DomainError(f"r={r}: need at least one class")
    if r**n > _ENUM_GUARD:
        raise SizeError(f"r^n = {r}^{n} exceeds the enumeration guard {_ENUM_GUARD}")
    a = [0] * n
    mx = [0] * n  # mx[i] = max(a[0..i])
    while True:
        yield Partition(n, r, tuple(a))
        i = n - 1
        while i > 0 and not (a[i] <= mx[i - 1] and a[i] < r - 1):
            i -= 1
        if i == 0:
            return
        a[i] += 1
        mx[i] = max(mx[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            mx[j] = mx[i]


# ---------------------------------------------------------------------------
# cliques
# ---------------------------------------------------------------------------


def contains_clique(g: LabeledGraph, k: int) -> bool:
    """True iff g has k pairwise-adjacent vertices.

    k > n returns False (no clique possible); k <= 0 is vacuously True.
    Recursive neighbor-mask intersection, candidates restricted to vertices
    above the last one picked so each clique is visited once.
    """
    if k <= 0:
        return True
    if k > g.n:
        return False
    adj = g.adjacency()

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

    return rec((1 << g.n) - 1, k)


def count_cliques(g: LabeledGraph, k: int) -> int:
    """Exact number of k-cliques of g (k <= 0 counts the empty clique once)."""
    if k <= 0:
        return 1
    if k > g.n:
        return 0
    adj = g.adjacency()

    def rec(cand: int, need: int) -> int:
        if need == 1:
            return cand.bit_count()
        total = 0
        while cand:
            if cand.bit_count() < need:
                break
            low = cand & -cand
            cand ^= low
            total += rec(cand & adj[low.bit_length() - 1], need - 1)
        return total

    return rec((1 << g.n) - 1, k)


# ---------------------------------------------------------------------------
# colorings
# ---------------------------------------------------------------------------


def _bipartition_least(adj: Sequence[int], n: int) -> Optional[List[int]]:
    # BFS 2-coloring; per component the earliest vertex gets color 0, which
    # makes the overall color vector lexicographically least.
    color: List[int] = [-1] * n
    for s in range(n):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = [s]
        while queue:
            u = queue.pop()
            cu = color[u]
            nb = adj[u]
            while nb:
                low = nb & -nb
                nb ^= low
                v = low.bit_length() - 1
                if color[v] == -1:
                    color[v] = 1 - cu
                    queue.append(v)
                elif color[v] == cu:
                    return None
    return color


def _extendable(adj: Sequence[int], n: int, r: int, color: List[int]) -> bool:
    # Decision backtracking: can the partial coloring (entries -1 are free)
    # be completed?  Picks the most saturated undecided vertex first
    # (greatest-constrained ordering), breaking ties by degree then index.
    forbidden = [0] * n  # bitmask of colors ruled out per vertex
    undecided = 0
    for v in range(n):
        if color[v] == -1:
            undecided |= 1 << v
        else:
            nb = adj[v]
            bit = 1 << color[v]
            while nb:
                low = nb & -nb
                nb ^= low
                forbidden[low.bit_length() - 1] |= bit
    full = (1 << r) - 1
    deg = [adj[v].bit_count() for v in range(n)]

    def rec(undecided: int) -> bool:
        if undecided == 0:
            return True
        best_v = -1
        best_key = (-1, -1, 0)
        m = undecided
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            if forbidden[v] == full:
                return False
            key = (forbidden[v].bit_count(), deg[v], -v)
            if key > best_key:
                best_key, best_v = key, v
        v = best_v
        rest = undecided ^ (1 << v)
        avail = full & ~forbidden[v]
        while avail:
            cbit = avail & -avail
            avail ^= cbit
            touched = []
            nb = adj[v] & rest
            ok = True
            while nb:
                low = nb & -nb
                nb ^= low
                w = low.bit_length() - 1
                if not forbidden[w] & cbit:
                    forbidden[w] |= cbit
                    touched.append(w)
                    if forbidden[w] == full:
                        ok = False  # dead neighbor; undo and try next color
            if ok and rec(rest):
                return True
            for w in touched:
                forbidden[w] ^= cbit
        return False

    return rec(undecided)


def is_r_colorable(g: LabeledGraph, r: int) -> Optional[Partition]:
    """A proper r-coloring of g if one exists, else None.

    The witness is canonical: the lexicographically least proper color
    vector, built by fixing colors vertex by vertex and testing
    extendability with a backtracking solver.  Deterministic.
    """
    if r < 1:
        raise DomainError(f"r={r}: need at least one color")
    n = g.n
    adj = g.adjacency()
    if r == 1:
        return Partition(n, 1, (0,) * n) if g.edges == 0 else None
    if r == 2:
        vec = _bipartition_least(adj, n)
        return Partition(n, 2, tuple(vec)) if vec is not None else None
    color = [-1] * n
    if not _extendable(adj, n, r, color):
        return None
    max_used = -1
    for v in range(n):
        # lex-least vectors are restricted-growth: no point trying a color
        # more than one above the highest used so far
        for c in range(min(max_used + 2, r)):
            nb = adj[v]
            conflict = False
            while nb:
                low = nb & -nb
                nb ^= low
                w = low.bit_length() - 1
                if color[w] == c:
                    conflict = True
                    break
            if conflict:
                continue
            color[v] = c
            if _extendable(adj, n, r, color):
                max_used = max(max_used, c)
                break
            color[v] = -1
        assert color[v] != -1, "extendability invariant violated"
    return Partition(n, r, tuple(color))


def miscolored_edges(g: LabeledGraph, p: Partition) -> int:
    """Number of edges of g with both endpoints in one class of p."""
    if p.n != g.n:
        raise DomainError(f"partition is over n={p.n} vertices, graph has n={g.n}")
    adj = g.adjacency()
    total = 0
    for c in range(p.r):
        mask = p.class_mask(c)
        m = mask
        while m:
            low = m & -m
            m ^= low
            total += (adj[low.bit_length() - 1] & mask).bit_count()
    return total // 2


def min_miscolored_exact(g: LabeledGraph, r: int) -> Tuple[int, Partition]:
    """Exhaustive minimum of miscolored_edges over all r-colorings of g.

    Ties are broken by the lexicographically least color vector.  Guarded
    by r^n <= 10^8; branch-and-bound in lexicographic order, so the first
    incumbent at the optimal value is the canonical one.
    """
    if r < 1:
        raise DomainError(f"r={r}: need at least one class")
    n = g.n
    if r**n > _ENUM_GUARD:
        raise SizeError(f"r^n = {r}^{n} exceeds the exhaustive-scan guard {_ENUM_GUARD}")
    adj = g.adjacency()
    best_cost = g.edge_count + 1
    best_vec: Optional[Tuple[int, ...]] = None
    color = [0] * n

    def rec(v: int, cost: int) -> None:
        nonlocal best_cost, best_vec
        if cost >= best_cost:
            return
        if v == n:
            best_cost, best_vec = cost, tuple(color[:])
            return
        nb = adj[v]
        same = [0] * r
        m = nb & ((1 << v) - 1)  # colored earlier vertices only
        while m:
            low = m & -m
            m ^= low
            same[color[low.bit_length() - 1]] += 1
        for c in range(r):
            color[v] = c
            rec(v + 1, cost + same[c])
        color[v] = 0

    rec(0, 0)
    assert best_vec is not None
    return best_cost, Partition(n, r, best_vec)


def local_min_partition(g: LabeledGraph, p0: Partition) -> Partition:
    """Greedy descent: move a vertex to a class where it has fewer neighbors.

    First improvement in vertex order, lowest target class first, repeated
    until every vertex has at least as many neighbors in each other class
    as in its own.  Terminates because each move strictly decreases the
    miscolored-edge count.  A proper coloring is returned unchanged.
    """
    if p0.n != g.n:
        raise DomainError(f"partition is over n={p0.n} vertices, graph has n={g.n}")
    n, r = g.n, p0.r
    adj = g.adjacency()
    class_of = list(p0.class_of)
    masks = [p0.class_mask(c) for c in range(r)]
    improved = True
    while improved:
        improved = False
        for v in range(n):
            cv = class_of[v]
            own = (adj[v] & masks[cv]).bit_count()
            if own == 0:
                continue
            for j in range(r):
                if j != cv and (adj[v] & masks[j]).bit_count() < own:
                    masks[cv] ^= 1 << v
                    masks[j] |= 1 << v
                    class_of[v] = j
                    improved = True
                    break
    return Partition(n, r, tuple(class_of))
