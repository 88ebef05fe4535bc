"""Edge-swap Metropolis sampler for uniform K_{r+1}-free graphs.

State space: all labeled graphs on n vertices with exactly m edges and no
clique on r+1 vertices.  A move picks one present edge and one absent
vertex pair uniformly at random and swaps them; the proposal is accepted
iff the swapped graph is still clique-free.  The proposal kernel is
symmetric and acceptance is a 0/1 symmetric constraint, so the chain is
reversible and its stationary distribution is uniform on each connected
component of the swap graph.  Whether the swap graph is connected for
every feasible (n, r, m) is an open question — near m = ex it can
demonstrably fall apart (at n=4, r=2, m=4 the three labelings of C_4 are
pairwise isolated) — so estimates are a practical compromise, mitigated
by running several chains from independently randomized starts and by
the tv_diagnostic at sizes where the exact law is available.

Chains start from a uniformly random m-subset of the edges of the
r-partite extremal (complete multipartite) graph, which is clique-free by
construction.  Randomness comes from numpy's Philox generator seeded
through SeedSequence so that multi-chain runs are reproducible and
streams never collide.

The between-chain standard error reported by estimate_rpartite is the
sample standard deviation of per-chain means divided by sqrt(chains);
tv_diagnostic compares the empirical joint law of (r-colorable?, number
of triangles) against the exact census distribution, which keeps it
honest even when the indicator of interest is nearly constant.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import sqrt
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from . import census
from .errors import DomainError, InfeasibleError, SizeError
from .graph_core import MAX_VERTICES, LabeledGraph, pair_table
from .graph_core import _extendable  # decision-only colorability, shared backtracker
from .turan import ex_turan, turan_graph

__all__ = [
    "ChainConfig",
    "ChainState",
    "EstimateResult",
    "init_chain",
    "step",
    "run_steps",
    "retained_samples",
    "estimate_rpartite",
    "tv_diagnostic",
]

_BLOCK = 1 << 14


@dataclass(frozen=True)
class ChainConfig:
    n: int
    r: int
    m: int
    seed: int = 0
    burn_in: int = 0
    thin: int = 1
    chains: int = 1

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise DomainError(f"n={self.n}: must lie in 1..{MAX_VERTICES}")
        if self.r < 2:
            raise DomainError(f"r={self.r}: need r >= 2")
        if self.m < 0:
            raise DomainError(f"m={self.m}: edge count cannot be negative")
        cap = ex_turan(self.n, self.r + 1)
        if self.m > cap:
            raise InfeasibleError(
                f"m={self.m}: no clique-free graph on n={self.n} vertices has "
                f"more than {cap} edges"
            )
        if self.burn_in < 0:
            raise DomainError(f"burn_in={self.burn_in}: cannot be negative")
        if self.thin < 1:
            raise DomainError(f"thin={self.thin}: must be at least 1")
        if self.chains < 1:
            raise DomainError(f"chains={self.chains}: must be at least 1")


class ChainState:
    """Mutable chain state: adjacency masks plus the present/absent slot
    pools, swapped in place so each move is O(1) bookkeeping."""

    __slots__ = (
        "cfg",
        "pairs",
        "adj",
        "present",
        "absent",
        "rng",
        "steps_taken",
        "accepted_moves",
    )

    def __init__(
        self,
        cfg: ChainConfig,
        pairs: Tuple[Tuple[int, int], ...],
        adj: List[int],
        present: List[int],
        absent: List[int],
        rng: np.random.Generator,
    ) -> None:
        self.cfg = cfg
        self.pairs = pairs
        self.adj = adj
        self.present = present
        self.absent = absent
        self.rng = rng
        self.steps_taken = 0
        self.accepted_moves = 0

    def current_graph(self) -> LabeledGraph:
        mask = 0
        for s in self.present:
            mask |= 1 << s
        return LabeledGraph(self.cfg.n, mask)

    def edges_digest(self) -> str:
        data = ",".join(str(s) for s in sorted(self.present)).encode("ascii")
        return hashlib.sha256(data).hexdigest()[:16]

    def triangle_count(self) -> int:
        total = 0
        for s in self.present:
            u, v = self.pairs[s]
            total += (self.adj[u] & self.adj[v]).bit_count()
        return total // 3

    def is_r_colorable(self) -> bool:
        cfg = self.cfg
        if cfg.r == 2:
            return _bipartite(self.adj, cfg.n)
        return _extendable(self.adj, cfg.n, cfg.r, [-1] * cfg.n)


def _bipartite(adj: List[int], n: int) -> bool:
    color = [-1] * n
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = [s]
        while queue:
            u = queue.pop()
            nb = adj[u]
            while nb:
                w = (nb & -nb).bit_length() - 1
                nb &= nb - 1
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def init_chain(cfg: ChainConfig, chain_index: int = 0) -> ChainState:
    """Fresh chain at a uniformly random m-subset of the extremal graph's
    edges.  chain_index selects one of cfg.chains spawned seed streams."""
    if not 0 <= chain_index < cfg.chains:
        raise DomainError(
            f"chain_index={chain_index}: must lie in 0..{cfg.chains - 1}"
        )
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.chains)
    rng = np.random.Generator(np.random.Philox(seeds[chain_index]))
    n = cfg.n
    pt = pair_table(n)
    host = turan_graph(n, cfg.r)
    host_slots = [i for i in range(len(pt)) if host.edges >> i & 1]
    chosen = rng.choice(len(host_slots), size=cfg.m, replace=False) if cfg.m else []
    present = sorted(host_slots[int(i)] for i in chosen)
    present_set = set(present)
    absent = [i for i in range(len(pt)) if i not in present_set]
    adj = [0] * n
    for s in present:
        u, v = pt[s]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return ChainState(cfg, pt, adj, present, absent, rng)


def _mask_clique(adj: List[int], cand: int, k: int) -> bool:
    """Does the induced subgraph on the candidate mask contain K_k?
    Vertices are consumed in increasing order, so each clique is probed once."""
    if k <= 0:
        return True
    if cand.bit_count() < k:
        return False
    rest = cand
    while rest:
        v = (rest & -rest).bit_length() - 1
        rest &= rest - 1
        if _mask_clique(adj, rest & adj[v], k - 1):
            return True
    return False


def _attempt_swap(state: ChainState, i: int, j: int) -> bool:
    adj = state.adj
    e = state.present[i]
    f = state.absent[j]
    ue, ve = state.pairs[e]
    uf, vf = state.pairs[f]
    adj[ue] &= ~(1 << ve)
    adj[ve] &= ~(1 << ue)
    # a new clique on r+1 vertices through (uf,vf) needs K_{r-1} among
    # their common neighbors
    if not _mask_clique(adj, adj[uf] & adj[vf], state.cfg.r - 1):
        adj[uf] |= 1 << vf
        adj[vf] |= 1 << uf
        state.present[i] = f
        state.absent[j] = e
        state.accepted_moves += 1
        return True
    adj[ue] |= 1 << ve
    adj[ve] |= 1 << ue
    return False


def step(state: ChainState) -> bool:
    """One Metropolis move; returns whether it was accepted.  When either
    pool is empty the state space is a single graph and the move is a
    counted self-loop."""
    state.steps_taken += 1
    m = len(state.present)
    a = len(state.absent)
    if m == 0 or a == 0:
        return False
    i = int(state.rng.integers(m))
    j = int(state.rng.integers(a))
    return _attempt_swap(state, i, j)


def run_steps(
    state: ChainState,
    nsteps: int,
    *,
    on_sample: Optional[Callable[[ChainState], None]] = None,
) -> None:
    """Advance the chain nsteps moves, drawing proposal indices in blocks
    (one rng call per block keeps the per-move cost down).  on_sample
    fires at every step s with s > burn_in and (s - burn_in) % thin == 0,
    counting steps from the chain's creation."""
    cfg = state.cfg
    burn_in, thin = cfg.burn_in, cfg.thin
    m = len(state.present)
    a = len(state.absent)

    def maybe_record() -> None:
        s = state.steps_taken
        if on_sample is not None and s > burn_in and (s - burn_in) % thin == 0:
            on_sample(state)

    if m == 0 or a == 0:
        for _ in range(nsteps):
            state.steps_taken += 1
            maybe_record()
        return

    done = 0
    while done < nsteps:
        block = min(_BLOCK, nsteps - done)
        ii = state.rng.integers(0, m, size=block).tolist()
        jj = state.rng.integers(0, a, size=block).tolist()
        if on_sample is None:
            for t in range(block):
                _attempt_swap(state, ii[t], jj[t])
            state.steps_taken += block
        else:
            for t in range(block):
                _attempt_swap(state, ii[t], jj[t])
                state.steps_taken += 1
                maybe_record()
        done += block


class EstimateResult(NamedTuple):
    estimate: float
    stderr: float
    acceptance_rate: float


def retained_samples(cfg: ChainConfig, total_steps: int) -> int:
    """How many samples estimate_rpartite will keep for this budget."""
    per_chain = total_steps // cfg.chains
    if per_chain <= cfg.burn_in:
        return 0
    return cfg.chains * ((per_chain - cfg.burn_in) // cfg.thin)


def estimate_rpartite(
    cfg: ChainConfig,
    total_steps: int,
    *,
    log: Optional[List[dict]] = None,
) -> EstimateResult:
    """Monte Carlo estimate of the fraction of clique-free (n, m) graphs
    that are r-colorable, with between-chain standard error.

    The step budget is split evenly: each of cfg.chains chains runs
    total_steps // chains moves and records the indicator after burn-in at
    the thinning cadence.  stderr is 0.0 for a single chain.  When log is
    given, one dict per retained sample is appended (step, is_rcol,
    triangles, edges_hash), chains concatenated in order.
    """
    if total_steps < 1:
        raise DomainError(f"total_steps={total_steps}: need at least one move")
    per_chain = total_steps // cfg.chains
    if per_chain <= cfg.burn_in:
        raise DomainError(
            f"burn_in={cfg.burn_in}: each chain only runs {per_chain} moves"
        )
    chain_means = []
    accepted = 0
    stepped = 0
    for ci in range(cfg.chains):
        state = init_chain(cfg, ci)
        hits = [0, 0]  # [total, colorable]

        def record(st: ChainState, _hits: List[int] = hits) -> None:
            ok = st.is_r_colorable()
            _hits[0] += 1
            _hits[1] += ok
            if log is not None:
                log.append(
                    {
                        "step": st.steps_taken,
                        "is_rcol": int(ok),
                        "triangles": st.triangle_count(),
                        "edges_hash": st.edges_digest(),
                    }
                )

        run_steps(state, per_chain, on_sample=record)
        if hits[0] == 0:
            raise DomainError(
                f"thin={cfg.thin}, burn_in={cfg.burn_in}: chain {ci} retained no samples"
            )
        chain_means.append(hits[1] / hits[0])
        accepted += state.accepted_moves
        stepped += state.steps_taken
    estimate = sum(chain_means) / len(chain_means)
    if len(chain_means) > 1:
        var = sum((x - estimate) ** 2 for x in chain_means) / (len(chain_means) - 1)
        stderr = sqrt(var / len(chain_means))
    else:
        stderr = 0.0
    return EstimateResult(
        estimate=estimate,
        stderr=stderr,
        acceptance_rate=accepted / stepped if stepped else 0.0,
    )


def tv_diagnostic(cfg: ChainConfig, total_steps: int) -> float:
    """Total-variation distance between the sampler's empirical law of
    (r-colorable?, triangle count) and the exact census law at (n, r, m).

    Needs the exact joint distribution, hence n <= 7."""
    if cfg.n > 7:
        raise SizeError(f"n={cfg.n}: the diagnostic needs the exact law (n <= 7)")
    exact_counts = census.summary_counts(cfg.n, cfg.r, cfg.m)
    total_exact = sum(exact_counts.values())
    if total_exact == 0:
        raise DomainError(
            f"m={cfg.m}: no clique-free graph with that edge count at n={cfg.n}"
        )
    empirical: Dict[Tuple[bool, int], int] = {}
    samples = 0
    for ci in range(cfg.chains):
        state = init_chain(cfg, ci)

        def record(st: ChainState) -> None:
            nonlocal samples
            key = (st.is_r_colorable(), st.triangle_count())
            empirical[key] = empirical.get(key, 0) + 1
            samples += 1

        run_steps(state, total_steps // cfg.chains, on_sample=record)
    if samples == 0:
        raise DomainError(
            f"burn_in={cfg.burn_in}, thin={cfg.thin}: no samples retained"
        )
    keys = set(empirical) | set(exact_counts)
    return 0.5 * sum(
        abs(empirical.get(k, 0) / samples - exact_counts.get(k, 0) / total_exact)
        for k in keys
    )
