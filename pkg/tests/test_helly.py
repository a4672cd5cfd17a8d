import random
from fractions import Fraction

import pytest
from oracles import piercing_oracle

from conncover import simplicial as sc
from conncover.covers import Cover, canonical_cover_from_minor, validate_cover
from conncover.errors import InputError
from conncover.generators import random_connected_cover, random_connected_graph, random_planar_graph
from conncover.graphs import complete_graph, cycle_graph, hadwiger_number, path_graph, verify_certificate
from conncover.helly import (
    HellyConfiguration,
    colorful_k5_builder,
    configuration_problems,
    fractional_helly_stats,
    generalized_colorful_builder,
    grid_colorful_fixture,
    helly_number,
    minimal_non_faces,
    minor_from_helly_configuration,
    piercing_number,
    piercing_number_bruteforce,
    pq_property,
)
from conncover.planar import is_planar

C6_ARCS = [{1, 2, 3}, {3, 4, 5}, {5, 6, 1}]


def arcs():
    return Cover(cycle_graph(6), C6_ARCS)


def canonical(g):
    _, cert = hadwiger_number(g)
    return canonical_cover_from_minor(cert, g)


def test_helly_examples():
    h, hc = helly_number(arcs())
    assert h == 3 and hc.member_indices == (0, 1, 2)
    g = path_graph(4)
    assert helly_number(Cover(g, [{1, 2}, {2, 3}, {2}])) == (1, None)


def test_minimal_non_faces_of_sphere_boundary():
    k = sc.SimplicialComplex.simplex_boundary(range(4))
    assert minimal_non_faces(k, 4) == [(0, 1, 2, 3)]
    two_points = sc.SimplicialComplex.from_maximal([(0,), (1,)])
    assert minimal_non_faces(two_points, 2) == [(0, 1)]


def test_minor_from_configuration_examples():
    c = canonical(complete_graph(4))
    cert = minor_from_helly_configuration(c, HellyConfiguration((0, 1, 2, 3)))
    assert len(cert.pattern) == 4 and all(len(b) == 1 for b in cert.branch_sets())
    cert = minor_from_helly_configuration(arcs(), HellyConfiguration((0, 1, 2)))
    assert verify_certificate(cycle_graph(6), cert) and len(cert.pattern) == 3


def test_configuration_problems():
    assert not configuration_problems(arcs(), HellyConfiguration((0, 1, 2)))
    assert configuration_problems(arcs(), HellyConfiguration((0, 1)))
    with pytest.raises(InputError):
        minor_from_helly_configuration(arcs(), HellyConfiguration((0, 1)))


def test_helly_certificates_on_random_covers():
    rng = random.Random(31)
    made = 0
    for _ in range(100):
        g = random_connected_graph(rng, rng.randint(3, 10), rng.uniform(0.2, 0.6))
        c = random_connected_cover(rng, g, 8)
        h, hc = helly_number(c)
        if hc is None or hc.m < 3:
            continue
        cert = minor_from_helly_configuration(c, hc)
        assert verify_certificate(g, cert) and len(cert.pattern) == hc.m
        assert h <= hadwiger_number(g)[0]
        made += 1
    assert made > 5


def test_pq_examples():
    together = Cover(path_graph(3), [{1, 2}, {2, 3}, {2}])
    assert all(pq_property(together, p, q) for p in (2, 3) for q in range(2, p + 1))
    apart = Cover(path_graph(5), [{1}, {3}, {5}])
    assert not pq_property(apart, 3, 2)
    assert pq_property(arcs(), 3, 2)
    assert not pq_property(arcs(), 3, 3)
    with pytest.raises(InputError):
        pq_property(arcs(), 2, 3)


def test_pq_monotone_in_p():
    # a p-subfamily sits inside every larger one, so (p,q) passes upward in p
    rng = random.Random(32)
    downward_fails = 0
    for _ in range(60):
        g = random_planar_graph(rng, 9, 3)
        c = random_connected_cover(rng, g, 7)
        n = len(c)
        for p in range(2, n + 1):
            for q in range(2, p + 1):
                if pq_property(c, p, q):
                    assert all(pq_property(c, pp, q) for pp in range(p, n + 1))
                    downward_fails += not all(pq_property(c, pp, q) for pp in range(q, p + 1))
    # the downward direction is genuinely false on some instances
    assert downward_fails > 0


def test_piercing_examples():
    together = Cover(path_graph(3), [{1, 2}, {2, 3}, {2}])
    assert piercing_number(together).size == 1
    apart = Cover(path_graph(7), [{1}, {3}, {5}, {7}])
    sol = piercing_number(apart)
    assert sol.size == 4 and sol.vertices == {1, 3, 5, 7}


def test_three_three_property_with_piercing_two():
    # planar K4: every three canonical members meet, all four do not
    c = canonical(complete_graph(4))
    assert is_planar(c.ambient) and validate_cover(c).valid
    assert pq_property(c, 3, 3)
    assert piercing_number(c).size == 2


def test_piercing_matches_enumeration():
    rng = random.Random(33)
    for _ in range(120):
        g = random_connected_graph(rng, rng.randint(2, 12), rng.uniform(0.15, 0.5))
        c = random_connected_cover(rng, g, 10)
        sol = piercing_number(c)
        expected = piercing_oracle(g.vertices, list(c.members))
        assert sol.size == expected == piercing_number_bruteforce(c)
        assert all(m & sol.vertices for m in c.members)
        assert all(sol.assignment[i] in c.members[i] for i in range(len(c)))


def test_fractional_helly_examples():
    g = path_graph(3)
    together = Cover(g, [{1, 2}, {2, 3}, {2}, {1, 2, 3}])
    assert fractional_helly_stats(together, 4) == (Fraction(1), Fraction(1))
    apart = Cover(path_graph(7), [{1}, {3}, {5}, {7}])
    alpha, beta = fractional_helly_stats(apart, 4)
    assert alpha == 0 and beta == Fraction(1, 4)
    with pytest.raises(InputError):
        fractional_helly_stats(apart, 5)


def test_full_alpha_with_small_helly_number_means_total_intersection():
    rng = random.Random(34)
    for _ in range(80):
        g = random_planar_graph(rng, 9, 3)
        c = random_connected_cover(rng, g, 8)
        if len(c) < 4:
            continue
        alpha, beta = fractional_helly_stats(c, 4)
        h, _ = helly_number(c)
        if alpha == 1 and h <= 4:
            assert beta == 1


def test_colorful_quadruple_when_members_stack():
    c, _, a, b, cc = grid_colorful_fixture(5)
    # add the whole grid to one slab so four members share a vertex
    members = list(c.members)
    members[0] = members[0] | members[5]
    stacked = Cover(c.ambient, members)
    res = colorful_k5_builder(stacked, a, b, cc)
    assert res.tuple_ is not None and stacked.intersection(res.tuple_)


def test_colorful_grid_gives_k5():
    c, _, a, b, cc = grid_colorful_fixture(5)
    res = colorful_k5_builder(c, a, b, cc)
    assert res.certificate is not None and verify_certificate(c.ambient, res.certificate)
    assert len(res.certificate.pattern) == 5


def test_generalized_builder_specialisation_and_k4():
    c, singles, a, b, cc = grid_colorful_fixture(5)
    assert generalized_colorful_builder(c, singles, a, b, cc, 5) == colorful_k5_builder(c, a, b, cc)
    c4, s4, a4, b4, cc4 = grid_colorful_fixture(4, singles=2)
    res = generalized_colorful_builder(c4, s4, a4, b4, cc4, 4)
    assert res.certificate is not None and len(res.certificate.pattern) == 4
    assert verify_certificate(c4.ambient, res.certificate)


def test_colorful_builder_checks_hypothesis():
    c, _, a, b, cc = grid_colorful_fixture(5)
    with pytest.raises(InputError):
        colorful_k5_builder(c, b, a, cc[:9] + a[:1])
    with pytest.raises(InputError):
        generalized_colorful_builder(c, (), a[:4], b[:4], cc[:6], 4)
