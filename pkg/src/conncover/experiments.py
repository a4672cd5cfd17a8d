"""Seeded sweeps and worked examples, shared by the CLI and the acceptance tests.

Each fixture returns a list of :class:`Check` records, one per assertion.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import simplicial as sc
from .covers import Cover, gamma_bounds
from .generators import (
    random_clique_sum,
    random_connected_cover,
    random_k4_free_graph,
    random_planar_graph,
    random_subtree_colorful_cover,
)
from .graphs import (
    complete_graph,
    complete_multipartite,
    has_minor,
    hadwiger_number,
    verify_certificate,
    wagner_graph,
)
from .helly import (
    colorful_k5_builder,
    fractional_helly_bound,
    fractional_helly_stats,
    grid_colorful_fixture,
    helly_number,
    minor_from_helly_configuration,
)
from .planar import face_fill_pipeline, is_planar


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


# --- worked examples -------------------------------------------------------


def fixture_kn(n_max: int = 6) -> list[Check]:
    out = []
    for n in range(2, n_max + 1):
        b = gamma_bounds(complete_graph(n))
        out.append(Check(f"gamma(K{n}) = {n - 2}", b.lower == b.upper == n - 2, b.to_json()))
    return out


def multipartite_size_lists(max_vertices: int = 8) -> list[tuple[int, ...]]:
    """Non-increasing part sizes t1 >= ... >= tr with r >= 2 and sum <= max_vertices."""
    out = []

    def rec(prefix: list[int], left: int, cap: int) -> None:
        if len(prefix) >= 2:
            out.append(tuple(prefix))
        for t in range(min(cap, left), 0, -1):
            rec(prefix + [t], left - t, t)

    rec([], max_vertices, max_vertices)
    return sorted(out, key=lambda t: (sum(t), t))


def fixture_multipartite(max_vertices: int = 8) -> list[Check]:
    out = []
    for sizes in multipartite_size_lists(max_vertices):
        g = complete_multipartite(*sizes)
        h, _ = hadwiger_number(g)
        b = gamma_bounds(g)
        name = "gamma(K_{" + ",".join(map(str, sizes)) + "}) = m - 2"
        out.append(Check(name, b.lower == b.upper == h - 2, {"hadwiger": h, **b.to_json()}))
    return out


def fixture_w8() -> list[Check]:
    g = wagner_graph()
    b = gamma_bounds(g)
    w = b.lower_witness
    return [
        Check("W8 has no K5 minor", has_minor(g, complete_graph(5)) is None),
        Check("W8 lower bound 2 from a K4 cover", b.lower == 2 and w is not None and sc.betti_at(w.nerve(), 2) == 1),
        Check("W8 upper bound 2", b.upper == 2, {"rule": b.upper_rule}),
        Check("W8 is not planar", not is_planar(g)),
    ]


SPHERE_TAU = [(1, 2, 3), (2, 4, 5), (3, 4, 5), (1, 3, 4), (2, 3, 5), (1, 2, 4)]
SPHERE_ORDERS = {
    "order1": SPHERE_TAU,
    "order2": [SPHERE_TAU[1], SPHERE_TAU[0]] + SPHERE_TAU[2:],
}
SPHERE_T = {
    "order1": [(1, 2, 3, 5), (1, 2, 4, 5), (1, 3, 4, 5)],
    "order2": [(1, 2, 3, 4), (2, 3, 4, 5)],
}


def fixture_sphere_tchain() -> list[Check]:
    tau = sc.Chain.of(2, SPHERE_TAU)
    out = [Check("tau is a 2-cycle", not sc.boundary(tau))]
    for name, order in SPHERE_ORDERS.items():
        masks = [sc.to_mask(t) for t in order]
        fast = sc.tchain(tau, masks)
        slow = sc.tchain_direct(tau, masks)
        expected = sc.Chain.of(3, SPHERE_T[name])
        out.append(Check(f"T for {name} matches the worked example", fast == slow == expected, {"T": fast.as_lists()}))
        out.append(Check(f"boundary of T for {name} is tau", sc.boundary(fast) == tau))
    return out


# --- random ordered 2-cycles ---------------------------------------------------


def random_two_cycle(rng: random.Random, n_vertices: int = 8) -> sc.Chain:
    """Boundary of a random 3-chain on at most n_vertices vertices (retried until nonzero)."""
    tets = list(itertools.combinations(range(1, n_vertices + 1), 4))
    while True:
        k = rng.randint(1, min(6, len(tets)))
        beta = sc.Chain.of(3, rng.sample(tets, k))
        tau = sc.boundary(beta)
        if tau:
            return tau


def fixture_tchain_sweep(seed: int = 0, count: int = 500) -> list[Check]:
    rng = random.Random(seed)
    bad = []
    for i in range(count):
        tau = random_two_cycle(rng, rng.randint(4, 8))
        order = sorted(tau.simplices)
        rng.shuffle(order)
        t = sc.tchain(tau, order)
        if sc.boundary(t) != tau or t != sc.tchain_direct(tau, order):
            bad.append(i)
    return [Check(f"boundary of T equals tau on {count} random pairs", not bad, {"failures": bad})]


# --- planar pipeline ----------------------------------------------------------


def fixture_planar_pipeline(seed: int = 0, count: int = 100) -> list[Check]:
    rng = random.Random(seed)
    b3_bad, trace_bad, steps = [], [], 0
    crossing = 0
    for i in range(count):
        g = random_planar_graph(rng, 10)
        c = random_connected_cover(rng, g, 8)
        if sc.betti_at(c.nerve(), 3):
            b3_bad.append(i)
        tr = face_fill_pipeline(c)
        steps += len(tr.steps)
        crossing += sum(s.crossing_checks for s in tr.steps)
        if not tr.ok:
            trace_bad.append(i)
    return [
        Check("b3 of every planar cover nerve vanishes", not b3_bad, {"failures": b3_bad}),
        Check(
            "every pipeline keeps b3 = 0 and ends in a cone",
            not trace_bad,
            {"failures": trace_bad, "steps": steps, "crossing_checks": crossing},
        ),
    ]


# --- clique sums ---------------------------------------------------------------


def fixture_clique_sums(seed: int = 0, count: int = 50) -> list[Check]:
    rng = random.Random(seed)
    had_bad, low_bad = [], []
    for i in range(count):
        g, a, b, split = random_clique_sum(rng)
        hg, ha, hb = (hadwiger_number(x)[0] for x in (g, a, b))
        if hg != max(ha, hb):
            had_bad.append(i)
        lg = gamma_bounds(g).lower
        la, lb = gamma_bounds(a).lower, gamma_bounds(b).lower
        if lg != max(la, lb):
            low_bad.append(i)
    return [
        Check("hadwiger(G) = max over the parts", not had_bad, {"failures": had_bad}),
        Check("gamma lower bound of G = max over the parts", not low_bad, {"failures": low_bad}),
    ]


# --- Helly sweeps --------------------------------------------------------------


def fixture_helly_sweep(seed: int = 0, count: int = 100) -> list[Check]:
    rng = random.Random(seed)
    bound_bad, cert_bad, certs = [], [], 0
    for i in range(count):
        if i % 2:
            g, r = random_k4_free_graph(rng, 10), 4
        else:
            g, r = random_planar_graph(rng, 10), 5
        if has_minor(g, complete_graph(r)) is not None:
            raise AssertionError("generator produced a graph with the forbidden minor")
        c = random_connected_cover(rng, g, 10)
        h, hc = helly_number(c)
        if h >= r:
            bound_bad.append(i)
        if hc is not None and hc.m >= 3:
            cert = minor_from_helly_configuration(c, hc)
            certs += 1
            if not verify_certificate(g, cert) or len(cert.pattern) != hc.m:
                cert_bad.append(i)
    return [
        Check("helly number below the forbidden clique size", not bound_bad, {"failures": bound_bad}),
        Check("every extracted certificate verifies", not cert_bad, {"failures": cert_bad, "certificates": certs}),
    ]


def planar_cover_instances(seed: int = 0, count: int = 50, max_members: int = 12) -> list[Cover]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_planar_graph(rng, 12, 4)
        c = random_connected_cover(rng, g, max_members)
        if len(c) >= 4:
            out.append(c)
    return out


def fixture_leray(seed: int = 0, count: int = 50) -> list[Check]:
    leray_bad, kalai_bad = [], []
    for i, c in enumerate(planar_cover_instances(seed, count)):
        k = c.nerve()
        if not sc.is_d_leray(k, 3):
            leray_bad.append(i)
        if not all(sc.kalai_facecount_check(k, 3, r) for r in (1, 2, 3)):
            kalai_bad.append(i)
    return [
        Check("planar cover nerves are 3-Leray", not leray_bad, {"failures": leray_bad}),
        Check("face-count inequality holds for r = 1..3", not kalai_bad, {"failures": kalai_bad}),
    ]


def fixture_frac_helly(seed: int = 0, count: int = 50) -> list[Check]:
    bad, rows = [], []
    for i, c in enumerate(planar_cover_instances(seed, count)):
        alpha, beta = fractional_helly_stats(c, 4)
        bound = fractional_helly_bound(alpha, len(c))
        rows.append({"members": len(c), "alpha": str(alpha), "beta_emp": str(beta)})
        if float(beta) < bound:
            bad.append(i)
    return [Check("beta_emp >= 1 - (1 - alpha)^(1/4) - 1/|F|", not bad, {"failures": bad, "instances": len(rows)})]


def fixture_colorful(seed: int = 0, count: int = 50) -> list[Check]:
    rng = random.Random(seed)
    bad, made = [], 0
    while made < count:
        g = random_planar_graph(rng, 25, 14)
        inst = random_subtree_colorful_cover(rng, g)
        if inst is None:
            continue
        res = colorful_k5_builder(*inst)
        if res.tuple_ is None or not inst[0].intersection(res.tuple_):
            bad.append(made)
        made += 1
    c, _, a, b, cc = grid_colorful_fixture(5)
    res = colorful_k5_builder(c, a, b, cc)
    ok = res.certificate is not None and verify_certificate(c.ambient, res.certificate)
    return [
        Check("K5-free instances give an intersecting 4-tuple", not bad, {"failures": bad}),
        Check("grid fixture gives a verified K5 certificate", ok),
    ]


FIXTURES: dict[str, Callable[..., list[Check]]] = {
    "kn": lambda seed: fixture_kn(),
    "multipartite": lambda seed: fixture_multipartite(),
    "w8": lambda seed: fixture_w8(),
    "sphere-tchain": lambda seed: fixture_sphere_tchain() + fixture_tchain_sweep(seed),
    "planar-pipeline": lambda seed: fixture_planar_pipeline(seed),
    "clique-sums": lambda seed: fixture_clique_sums(seed),
    "helly-sweep": lambda seed: fixture_helly_sweep(seed),
    "leray": lambda seed: fixture_leray(seed),
    "frac-helly": lambda seed: fixture_frac_helly(seed),
    "colorful": lambda seed: fixture_colorful(seed),
}
