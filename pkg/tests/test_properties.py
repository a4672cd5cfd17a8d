"""Property-based checks of the chain and cover identities."""

import itertools

import networkx as nx
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import cover_is_connected_oracle, reduced_betti_oracle

from conncover import simplicial as sc
from conncover.covers import Cover, validate_cover
from conncover.graphs import Graph, from_graph6, to_graph6

TETS = list(itertools.combinations(range(1, 9), 4))

simplices = st.integers(1, 4).flatmap(
    lambda d: st.lists(st.lists(st.integers(1, 9), min_size=d + 1, max_size=d + 1, unique=True), min_size=1, max_size=8).map(
        lambda faces: sc.Chain.of(d, faces)
    )
)


@st.composite
def ordered_two_cycles(draw):
    tets = draw(st.lists(st.sampled_from(TETS), min_size=1, max_size=6, unique=True))
    tau = sc.boundary(sc.Chain.of(3, tets))
    order = draw(st.permutations(sorted(tau.simplices))) if tau else []
    return tau, list(order)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(range(1, n + 1), edges)


@st.composite
def covers(draw):
    g = draw(graphs())
    members = draw(st.lists(st.frozensets(st.sampled_from(g.vertices), min_size=1), min_size=1, max_size=5, unique=True))
    return Cover(g, members)


@given(simplices)
def test_boundary_of_boundary_vanishes(c):
    assert not sc.boundary(sc.boundary(c))


@given(simplices)
def test_cone_product_rule(beta):
    assert sc.boundary(sc.cone_chain(20, beta)) == beta + sc.cone_chain(20, sc.boundary(beta))


@settings(max_examples=200)
@given(ordered_two_cycles())
def test_tchain_boundary_is_tau(pair):
    tau, order = pair
    if not tau:
        return
    t = sc.tchain(tau, order)
    assert sc.boundary(t) == tau
    assert t == sc.tchain_direct(tau, order)


@settings(max_examples=100)
@given(ordered_two_cycles(), st.integers(0, 100))
def test_tchain_invariant_under_rotation_and_reversal(pair, shift):
    tau, order = pair
    if not tau:
        return
    k = shift % len(order)
    t = sc.tchain(tau, order)
    assert sc.tchain(tau, order[k:] + order[:k]) == t
    assert sc.tchain(tau, order[::-1]) == t


@given(st.lists(st.lists(st.integers(1, 10), min_size=1, max_size=4, unique=True), min_size=1, max_size=8))
def test_betti_matches_oracle(maximal):
    maximal = [tuple(sorted(f)) for f in maximal]
    assert sc.betti(sc.SimplicialComplex.from_maximal(maximal)) == reduced_betti_oracle(maximal)


@settings(max_examples=200)
@given(covers())
def test_validator_matches_oracle(c):
    assert validate_cover(c).valid == cover_is_connected_oracle(c.ambient.to_networkx(), list(c.members))


@given(graphs(max_n=12))
def test_graph6_round_trip(g):
    back = from_graph6(to_graph6(g))
    assert nx.is_isomorphic(back.to_networkx(), g.to_networkx())
    assert len(back.edges) == len(g.edges)
