"""Graph primitives: parsing, cliques, colorability, partitions, and the
balance band.  Small-n behavior is pinned by exhaustive enumeration."""

from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kfreelab import (
    BalanceSpec,
    DomainError,
    LabeledGraph,
    Partition,
    SizeError,
    contains_clique,
    count_cliques,
    enumerate_partitions,
    graph_literal,
    is_balanced,
    is_r_colorable,
    local_min_partition,
    min_miscolored_exact,
    miscolored_edges,
    parse_graph,
)

PETERSEN = "10;1-2,2-3,3-4,4-5,5-1,1-6,2-7,3-8,4-9,5-10,6-8,8-10,10-7,7-9,9-6"


def all_graphs(n):
    for mask in range(1 << (n * (n - 1) // 2)):
        yield LabeledGraph(n, mask)


def brute_min_miscolored(g, r):
    best = None
    for colors in product(range(r), repeat=g.n):
        p = Partition(g.n, r, colors)
        cost = miscolored_edges(g, p)
        if best is None or cost < best:
            best = cost
    return best


# -- literals ---------------------------------------------------------------


def test_literal_roundtrip_examples():
    for lit in ["3;1-2,2-3", "5;1-2,2-3,3-4,4-5,5-1", "4;"]:
        g = parse_graph(lit)
        assert parse_graph(graph_literal(g)) == g


@pytest.mark.parametrize(
    "bad",
    ["5", "3;1-1", "3;1-4", "3;0-2", "3;1-2,1-2", "3;a-2", "3;1-2,", ""],
)
def test_literal_rejects_malformed(bad):
    with pytest.raises(DomainError):
        parse_graph(bad)


@given(st.integers(2, 8), st.data())
def test_literal_roundtrip_random(n, data):
    nbits = n * (n - 1) // 2
    mask = data.draw(st.integers(0, (1 << nbits) - 1))
    g = LabeledGraph(n, mask)
    assert parse_graph(graph_literal(g)) == g


# -- cliques ----------------------------------------------------------------


def test_clique_count_fixtures():
    k4 = LabeledGraph.complete(4)
    assert count_cliques(k4, 3) == 4
    assert count_cliques(LabeledGraph.complete(5), 3) == 10
    assert count_cliques(parse_graph(PETERSEN), 3) == 0
    assert contains_clique(k4, 4) and not contains_clique(k4, 5)
    assert contains_clique(k4, 0)  # empty clique always present


def test_contains_iff_count_positive_exhaustive_n5():
    for g in all_graphs(5):
        for k in range(2, 6):
            assert contains_clique(g, k) == (count_cliques(g, k) > 0)


def test_count_cliques_k2_is_edge_count():
    for g in all_graphs(4):
        assert count_cliques(g, 2) == g.edge_count


# -- colorability -----------------------------------------------------------


def test_c5_colorability():
    c5 = parse_graph("5;1-2,2-3,3-4,4-5,5-1")
    assert is_r_colorable(c5, 2) is None
    w = is_r_colorable(c5, 3)
    assert w is not None and miscolored_edges(c5, w) == 0
    assert w.class_of == (0, 1, 0, 1, 2)  # lex-least proper vector


def test_petersen_three_colorable_not_two():
    pet = parse_graph(PETERSEN)
    assert is_r_colorable(pet, 2) is None
    w = is_r_colorable(pet, 3)
    assert w is not None and miscolored_edges(pet, w) == 0


def test_witness_is_lex_least_exhaustive_n4():
    for g in all_graphs(4):
        for r in (2, 3):
            w = is_r_colorable(g, r)
            proper = [
                c
                for c in product(range(r), repeat=4)
                if miscolored_edges(g, Partition(4, r, c)) == 0
            ]
            if w is None:
                assert not proper
            else:
                assert w.class_of == min(proper)


def test_colorable_iff_min_miscolored_zero_exhaustive_n5():
    for g in all_graphs(5):
        for r in (2, 3):
            cost, w = min_miscolored_exact(g, r)
            assert (cost == 0) == (is_r_colorable(g, r) is not None)
            assert miscolored_edges(g, w) == cost


def test_min_miscolored_fixtures():
    assert min_miscolored_exact(LabeledGraph.complete(4), 2)[0] == 2
    c5 = parse_graph("5;1-2,2-3,3-4,4-5,5-1")
    assert min_miscolored_exact(c5, 2)[0] == 1


def test_min_miscolored_matches_brute_force_n4():
    for g in all_graphs(4):
        cost, w = min_miscolored_exact(g, 2)
        assert cost == brute_min_miscolored(g, 2)
        # the witness itself is the lexicographically least optimum
        best = min(
            c
            for c in product(range(2), repeat=4)
            if miscolored_edges(g, Partition(4, 2, c)) == cost
        )
        assert w.class_of == best


def test_min_miscolored_guard():
    with pytest.raises(SizeError):
        min_miscolored_exact(LabeledGraph.complete(20), 4)


def test_local_min_triangle():
    k3 = LabeledGraph.complete(3)
    p0 = Partition(3, 2, (0, 0, 0))
    p = local_min_partition(k3, p0)
    assert miscolored_edges(k3, p) == 1


@given(st.integers(3, 7), st.data())
@settings(max_examples=60)
def test_local_min_is_a_fixpoint(n, data):
    nbits = n * (n - 1) // 2
    g = LabeledGraph(n, data.draw(st.integers(0, (1 << nbits) - 1)))
    r = data.draw(st.integers(2, 4))
    p0 = Partition(n, r, tuple(data.draw(st.integers(0, r - 1)) for _ in range(n)))
    p = local_min_partition(g, p0)
    base = miscolored_edges(g, p)
    adj = g.adjacency()
    for v in range(n):
        here = (adj[v] & p.class_mask(p.class_of[v])).bit_count()
        for c in range(r):
            if c != p.class_of[v]:
                there = (adj[v] & p.class_mask(c)).bit_count()
                assert there >= here  # no single move improves
    assert base <= miscolored_edges(g, p0)


# -- partitions -------------------------------------------------------------


def test_partition_counts():
    assert sum(1 for _ in enumerate_partitions(3, 2)) == 4
    assert sum(1 for _ in enumerate_partitions(4, 4)) == 15  # Bell(4)
    # S(5,1)+S(5,2)+S(5,3) = 1+15+25
    assert sum(1 for _ in enumerate_partitions(5, 3)) == 41


def test_partitions_are_canonical_and_distinct():
    seen = set()
    for p in enumerate_partitions(5, 3):
        assert p.class_of[0] == 0
        # restricted growth: class c appears only after all classes < c
        first = {}
        for v, c in enumerate(p.class_of):
            first.setdefault(c, v)
        assert sorted(first, key=first.get) == sorted(first)
        seen.add(p.class_of)
    assert len(seen) == 41


def test_enumerate_partitions_guard():
    with pytest.raises(SizeError):
        list(enumerate_partitions(30, 4))


def test_cross_plus_within_is_all_pairs():
    for p in enumerate_partitions(6, 3):
        assert p.cross_pair_count() + p.within_pair_count() == 15


def test_miscolored_is_within_class_edges():
    g = parse_graph("4;1-2,1-3,2-3,3-4")
    p = Partition(4, 2, (0, 0, 1, 1))
    assert miscolored_edges(g, p) == 2  # edges 1-2 and 3-4
    assert (g.edges & p.cross_edge_mask()).bit_count() == g.edge_count - 2


# -- balance ----------------------------------------------------------------


def test_balance_band_is_inclusive():
    spec = BalanceSpec(0.1)
    p46 = Partition(10, 2, tuple([0] * 4 + [1] * 6))
    p37 = Partition(10, 2, tuple([0] * 3 + [1] * 7))
    assert is_balanced(p46, spec)
    assert not is_balanced(p37, spec)


def test_balance_rejects_gamma_at_least_one_over_r():
    with pytest.raises(DomainError, match="gamma"):
        is_balanced(Partition(4, 2, (0, 0, 1, 1)), BalanceSpec(0.5))
    with pytest.raises(DomainError):
        BalanceSpec(1.0)


@pytest.mark.parametrize("r,gamma", [(2, 0.05), (2, 0.1), (3, 0.05), (3, 0.1)])
def test_unbalanced_partitions_lose_cross_pairs(r, gamma):
    # any partition with a class outside the band satisfies
    #   cross(P) <= (1 - 1/r) n^2/2 - gamma^2 r / (2(r-1)) * n^2
    for n in (20, 41, 60):
        cap = (1 - 1 / r) * n * n / 2 - gamma**2 * r / (2 * (r - 1)) * n * n
        lo, hi = (Fraction(1, r) - Fraction(gamma)) * n, (
            Fraction(1, r) + Fraction(gamma)
        ) * n
        for sizes in combinations(range(1, n), r - 1):
            parts = [sizes[0]] + [
                b - a for a, b in zip(sizes, sizes[1:])
            ] + [n - sizes[-1]]
            if all(lo <= s <= hi for s in parts):
                continue
            cross = (n * n - sum(s * s for s in parts)) // 2
            assert cross <= cap + 1e-9


# -- graph type -------------------------------------------------------------


def test_labeled_graph_validation():
    with pytest.raises(DomainError):
        LabeledGraph(33, 0)
    with pytest.raises(DomainError):
        LabeledGraph(3, 1 << 3)  # mask beyond C(3,2) bits
    with pytest.raises(DomainError):
        LabeledGraph.from_edge_list(3, [(0, 1), (1, 0)])


def test_adjacency_and_degree():
    g = parse_graph("4;1-2,1-3,1-4")
    assert g.degree(0) == 3
    assert g.adjacency()[0] == 0b1110
    assert sorted(g.edge_list()) == [(0, 1), (0, 2), (0, 3)]


def test_partition_validation():
    with pytest.raises(DomainError):
        Partition(3, 2, (0, 0))  # wrong length
    with pytest.raises(DomainError):
        Partition(3, 2, (0, 2, 0))  # class out of range
    p = Partition(5, 3, (0, 1, 0, 2, 1))
    assert p.class_sizes == (2, 2, 1)
