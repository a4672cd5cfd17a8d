import json
import random

import pytest
from oracles import cover_is_connected_oracle

from conncover import simplicial as sc
from conncover.covers import (
    Cover,
    SearchBudget,
    SearchStatus,
    canonical_cover_from_minor,
    clique_sum_restriction,
    connected_subsets,
    cover_from_json,
    cover_to_json,
    extend_to_partition,
    gamma_bounds,
    gamma_upper_bound,
    is_complete_multipartite,
    link_restriction_cover,
    minimal_cover_reduce,
    search_cover_with_homology,
    transport_cover,
    validate_cover,
    validate_cover_bruteforce,
)
from conncover.errors import InputError, PreconditionError
from conncover.generators import random_connected_cover, random_connected_graph, random_planar_graph
from conncover.graphs import (
    CliqueSumSplit,
    Graph,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    hadwiger_number,
    has_minor,
    path_graph,
    wagner_graph,
)


def canonical(g):
    _, cert = hadwiger_number(g)
    return canonical_cover_from_minor(cert, g)


def test_validate_examples():
    p3 = path_graph(3)
    r = validate_cover(Cover(p3, [{1, 2}, {2, 3}]))
    assert r.valid and Cover(p3, [{1, 2}, {2, 3}]).nerve().maximal_faces() == [(0, 1)]
    c4 = cycle_graph(4)
    assert validate_cover(Cover(c4, [{1, 2}, {3, 4}, {1, 2, 3, 4}])).valid
    bad = validate_cover(Cover(p3, [{1, 3}]))
    assert not bad.valid and bad.violation == (0,)
    assert bad.components == ((1,), (3,))


def test_validate_reports_minimal_violation():
    c4 = cycle_graph(4)
    r = validate_cover(Cover(c4, [{1, 2, 3}, {3, 4, 1}, {1}]))
    assert not r.valid and r.violation == (0, 1)


def test_validate_matches_bruteforce_and_oracle():
    rng = random.Random(11)
    for _ in range(300):
        g = random_connected_graph(rng, rng.randint(2, 9), rng.uniform(0.2, 0.6))
        members = {frozenset(rng.sample(g.vertices, rng.randint(1, len(g)))) for _ in range(rng.randint(1, 6))}
        c = Cover(g, members)
        fast, slow = validate_cover(c), validate_cover_bruteforce(c)
        assert fast.valid == slow.valid == cover_is_connected_oracle(g.to_networkx(), list(c.members))
        if not fast.valid:
            assert len(fast.violation) == len(slow.violation)


def test_cover_rejects_bad_members():
    g = path_graph(3)
    with pytest.raises(InputError):
        Cover(g, [set()])
    with pytest.raises(InputError):
        Cover(g, [{1, 9}])
    with pytest.raises(InputError):
        Cover(g, [{1, 2}, {2, 1}])


def test_canonical_cover_examples():
    k3 = canonical(complete_graph(3))
    assert sorted(map(sorted, k3.members)) == [[1, 2], [1, 3], [2, 3]]
    assert sc.betti(k3.nerve()) == [0, 1]
    k5 = canonical(complete_graph(5))
    assert k5.nerve() == sc.SimplicialComplex.simplex_boundary(range(5))
    assert sc.betti(k5.nerve()) == [0, 0, 0, 1]
    w8 = canonical(wagner_graph())
    assert len(w8) == 4 and sc.betti_at(w8.nerve(), 2) == 1


def test_canonical_covers_are_sphere_boundaries():
    rng = random.Random(12)
    for _ in range(40):
        g = random_connected_graph(rng, rng.randint(2, 9), rng.uniform(0.2, 0.8))
        h, cert = hadwiger_number(g)
        parts = extend_to_partition(cert, g)
        assert frozenset().union(*parts) == g.vertex_set
        assert sum(map(len, parts)) == len(g)
        c = canonical_cover_from_minor(cert, g)
        assert validate_cover(c).valid
        assert c.nerve() == sc.SimplicialComplex.simplex_boundary(range(h))


def test_transport_preserves_nerve():
    rng = random.Random(13)
    for _ in range(30):
        h = random_planar_graph(rng, 6, 3)
        g = random_connected_graph(rng, rng.randint(len(h), 9), 0.6)
        cert = has_minor(g, h)
        if cert is None:
            continue
        c = random_connected_cover(rng, h, 5)
        t = transport_cover(c, cert, g)
        assert validate_cover(t).valid
        assert t.nerve() == c.nerve()


def test_link_restriction_examples():
    k3 = canonical(complete_graph(3))
    r = link_restriction_cover(k3, 0)
    assert len(r.cover) == 2
    assert sorted(r.cover.nerve().maximal_faces()) == [(0,), (1,)]
    lonely = Cover(path_graph(4), [{1}, {3, 4}, {2, 3}])
    assert link_restriction_cover(lonely, 0).cover is None


def test_link_restriction_matches_link():
    rng = random.Random(14)
    for _ in range(60):
        g = random_planar_graph(rng, 9, 3)
        c = random_connected_cover(rng, g, 6)
        for x in range(len(c)):
            r = link_restriction_cover(c, x)
            if r.cover is not None:
                assert validate_cover(r.cover).valid
                assert r.family_nerve() == sc.link(c.nerve(), x)


def test_clique_sum_restriction_examples():
    # two triangles glued on the edge 2-3
    g = Graph(range(1, 5), [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    c = Cover(g, [{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}])
    split = CliqueSumSplit(frozenset({1, 2, 3}), frozenset({2, 3, 4}))
    ra, rb = clique_sum_restriction(c, split)
    assert validate_cover(ra.cover).valid and validate_cover(rb.cover).valid
    inside = Cover(g, [{1}, {1, 2, 3, 4}])
    ra, rb = clique_sum_restriction(inside, split)
    assert (0,) in ra.sources and all(0 not in s for s in rb.sources)
    with pytest.raises(InputError):
        clique_sum_restriction(c, CliqueSumSplit(frozenset({1, 2}), frozenset({3, 4})))


def test_minimal_cover_reduce():
    g = complete_graph(4)
    k4 = canonical(g)
    extra = Cover(g, list(k4.members) + [{1}])
    assert sc.betti_at(extra.nerve(), 2) == 1
    reduced = minimal_cover_reduce(extra, 2)
    assert set(reduced.members) == set(k4.members)
    assert minimal_cover_reduce(k4, 2).members == k4.members
    # a whole-graph member cones the nerve, so the precondition fails
    coned = Cover(g, list(k4.members) + [g.vertex_set])
    with pytest.raises(PreconditionError):
        minimal_cover_reduce(coned, 2)


def test_descent_chain():
    """Linking and reducing a minimal cover witnesses homology in every lower dimension."""
    g = complete_graph(5)
    c = minimal_cover_reduce(canonical(g), 3)
    for d in (3, 2, 1, 0):
        assert validate_cover(c).valid
        assert sc.betti_at(c.nerve(), d) > 0
        if d == 0:
            break
        r = link_restriction_cover(c, 0)
        c = minimal_cover_reduce(r.cover, d - 1)


def test_search_examples():
    res = search_cover_with_homology(cycle_graph(5), 1)
    assert res.status is SearchStatus.FOUND
    assert len(res.cover) == 3 and sc.betti_at(res.cover.nerve(), 1) == 1
    assert validate_cover(res.cover).valid
    tree = search_cover_with_homology(path_graph(5), 1)
    assert tree.status is SearchStatus.ABSENT and tree.cover is None
    tight = search_cover_with_homology(complete_graph(6), 3, SearchBudget(max_pool=10))
    assert tight.status is SearchStatus.EXHAUSTED


def test_search_finds_nothing_in_planar_dimension_three():
    res = search_cover_with_homology(complete_graph(4), 3, SearchBudget(max_members=6))
    assert res.status is not SearchStatus.FOUND


def test_connected_subsets_order():
    subsets, truncated = connected_subsets(path_graph(3))
    assert not truncated
    assert subsets == [frozenset(s) for s in ({1}, {2}, {3}, {1, 2}, {2, 3}, {1, 2, 3})]
    assert connected_subsets(complete_graph(5), 4)[1]


def test_gamma_examples():
    for n in range(2, 7):
        b = gamma_bounds(complete_graph(n))
        assert b.lower == b.upper == n - 2
    b = gamma_bounds(wagner_graph())
    assert b.lower == b.upper == 2 and b.upper_rule == "K5-free Wagner decomposition"
    b = gamma_bounds(path_graph(6))
    assert b.lower == b.upper == 0 and b.upper_rule == "forest"
    b = gamma_bounds(complete_multipartite(2, 2, 2))
    assert b.lower == b.upper == b.hadwiger - 2
    with pytest.raises(InputError):
        gamma_bounds(Graph([1, 2], []))


def test_gamma_lower_never_exceeds_upper():
    rng = random.Random(15)
    for _ in range(40):
        g = random_connected_graph(rng, rng.randint(2, 9), rng.uniform(0.2, 0.8))
        b = gamma_bounds(g)
        assert b.upper is None or b.lower <= b.upper
        assert validate_cover(b.lower_witness).valid
        assert sc.betti_at(b.lower_witness.nerve(), b.lower) > 0


def test_gamma_upper_rules():
    assert gamma_upper_bound(cycle_graph(7)) == (1, "K4-free clique-sum")
    assert gamma_upper_bound(complete_graph(4)) == (2, "planar")
    assert is_complete_multipartite(complete_multipartite(3, 2, 1))
    assert not is_complete_multipartite(cycle_graph(5))


def test_exhaustive_search_only_raises_lower():
    b = gamma_bounds(cycle_graph(5), SearchBudget(max_members=4), exhaustive=True)
    assert b.lower == 1 and b.upper == 1


def test_cover_json_round_trip():
    c = canonical(wagner_graph())
    data = cover_to_json(c)
    assert data["members"] == sorted(data["members"])
    back = cover_from_json(json.dumps(data))
    assert sc.betti(back.nerve()) == sc.betti(c.nerve())
    assert cover_to_json(back) == data
    for bad in ("not json", '{"graph": "Ch"}', '{"graph": "Ch", "members": [1]}'):
        with pytest.raises(InputError):
            cover_from_json(bad)
