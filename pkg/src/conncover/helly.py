"""Helly-type computations on covers: Helly number with minor extraction,
(p,q) property, piercing numbers, fractional-Helly statistics and the
colorful minor builders.

A subfamily is *intersecting* when its members share an ambient vertex.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import simplicial as sc
from .covers import Cover, validate_cover
from .errors import CapExceeded, InputError
from .graphs import Graph, MinorCertificate, certificate_problems, complete_graph, is_connected

DEFAULT_MEMBER_CAP = 20


@dataclass(frozen=True)
class HellyConfiguration:
    member_indices: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.member_indices)


def _meet(c: Cover, idx: Sequence[int]) -> frozenset[int]:
    return c.intersection(idx)


def minimal_non_faces(k: sc.SimplicialComplex, n: int) -> list[tuple[int, ...]]:
    """Vertex subsets of {0..n-1} missing from k whose facets are all present."""
    out = []
    for f in k.faces:
        top = f.bit_length()  # candidates add a vertex above every vertex of f
        for j in range(top, n):
            tau = f | (1 << j)
            if tau in k.faces:
                continue
            if all(tau & ~(1 << v) in k.faces for v in sc.labels(f)):
                out.append(sc.labels(tau))
    return sorted(out)


def helly_number(c: Cover, cap: int = DEFAULT_MEMBER_CAP) -> tuple[int, HellyConfiguration | None]:
    """Largest subfamily whose proper subfamilies intersect but which does not.

    Returns (1, None) when the whole family intersects.
    """
    if len(c) > cap:
        raise CapExceeded(f"helly number capped at {cap} members, got {len(c)}")
    nf = minimal_non_faces(c.nerve(), len(c))
    if not nf:
        return 1, None
    best = max(len(t) for t in nf)
    return best, HellyConfiguration(min(t for t in nf if len(t) == best))


def configuration_problems(c: Cover, hc: HellyConfiguration) -> list[str]:
    idx = hc.member_indices
    out = []
    if len(set(idx)) != len(idx) or not all(0 <= i < len(c) for i in idx):
        return ["member indices must be distinct valid indices"]
    if _meet(c, idx):
        out.append("the configuration intersects")
    for i in range(len(idx)):
        if not _meet(c, idx[:i] + idx[i + 1:]):
            out.append(f"dropping member {idx[i]} leaves an empty intersection")
    return out


def _bfs_path(g: Graph, allowed: frozenset[int], sources: frozenset[int], targets: frozenset[int]) -> list[int] | None:
    """Shortest path inside `allowed` from a source to a target, neighbours visited in label order."""
    parent: dict[int, int | None] = {}
    queue = deque()
    for s in sorted(sources):
        parent[s] = None
        queue.append(s)
    while queue:
        v = queue.popleft()
        if v in targets:
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in sorted(g.adj[v]):
            if w in allowed and w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def minor_from_helly_configuration(c: Cover, hc: HellyConfiguration) -> MinorCertificate:
    """K_m model from an m-member configuration.

    Part i is the intersection of all configuration members except the i-th.
    For i < j a shortest path inside the intersection of all members except
    i and j joins part i to part j; its interior is added to part i.
    """
    m = hc.m
    if m < 3:
        raise InputError("configuration must have at least 3 members")
    problems = configuration_problems(c, hc)
    if problems:
        raise InputError("invalid configuration: " + "; ".join(problems))
    if not validate_cover(c).valid:
        raise InputError("minor extraction needs a connected cover")
    idx = hc.member_indices
    g = c.ambient
    parts = [_meet(c, idx[:i] + idx[i + 1:]) for i in range(m)]
    branch = [set(p) for p in parts]
    for i, j in itertools.combinations(range(m), 2):
        rest = tuple(idx[k] for k in range(m) if k not in (i, j))
        path = _bfs_path(g, _meet(c, rest), parts[i], parts[j])
        if path is None:
            raise AssertionError(f"no path between parts {i} and {j}")
        branch[i].update(path[1:-1])
    cert = MinorCertificate(complete_graph(m), {i + 1: frozenset(b) for i, b in enumerate(branch)})
    problems = certificate_problems(g, cert)
    if problems:
        raise AssertionError("constructed certificate is invalid: " + "; ".join(problems))
    return cert


def pq_property(c: Cover, p: int, q: int) -> bool:
    """Among any p members some q share a vertex."""
    if not 2 <= q <= p <= len(c):
        raise InputError("need 2 <= q <= p <= number of members")
    k = c.nerve()
    q_faces = set(k.simplices(q - 1))
    for chosen in itertools.combinations(range(len(c)), p):
        if not any(sc.to_mask(t) in q_faces for t in itertools.combinations(chosen, q)):
            return False
    return True


# --- piercing -----------------------------------------------------------------


@dataclass(frozen=True)
class PiercingSolution:
    vertices: frozenset[int]
    assignment: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        return {"size": self.size, "vertices": sorted(self.vertices), "assignment": list(self.assignment)}


def _disjoint_packing(sets: list[frozenset[int]]) -> int:
    used: set[int] = set()
    count = 0
    for s in sorted(sets, key=len):
        if not s & used:
            used |= s
            count += 1
    return count


def _greedy_hitting(sets: list[frozenset[int]]) -> list[int]:
    chosen: list[int] = []
    left = list(sets)
    while left:
        counts: dict[int, int] = {}
        for s in left:
            for v in s:
                counts[v] = counts.get(v, 0) + 1
        v = min(counts, key=lambda u: (-counts[u], u))
        chosen.append(v)
        left = [s for s in left if v not in s]
    return chosen


def piercing_number(c: Cover, member_cap: int = 64, vertex_cap: int = 256) -> PiercingSolution:
    """Minimum vertex set meeting every member, by branch and bound."""
    if len(c) > member_cap or len(c.ambient) > vertex_cap:
        raise CapExceeded("piercing number input exceeds caps")
    sets = list(dict.fromkeys(c.members))
    best = _greedy_hitting(sets)

    def rec(chosen: list[int], left: list[frozenset[int]]) -> None:
        nonlocal best
        if not left:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + _disjoint_packing(left) >= len(best):
            return
        pivot = min(left, key=lambda s: (len(s), sorted(s)))
        score = {v: sum(1 for s in left if v in s) for v in pivot}
        for v in sorted(pivot, key=lambda u: (-score[u], u)):
            chosen.append(v)
            rec(chosen, [s for s in left if v not in s])
            chosen.pop()

    rec([], sets)
    verts = frozenset(best)
    assignment = tuple(min(m & verts) for m in c.members)
    return PiercingSolution(verts, assignment)


def piercing_number_bruteforce(c: Cover) -> int:
    """Smallest k with some k-subset of vertices meeting every member."""
    for k in range(len(c.ambient) + 1):
        for chosen in itertools.combinations(c.ambient.vertices, k):
            s = set(chosen)
            if all(m & s for m in c.members):
                return k
    raise AssertionError("unreachable")


# --- fractional Helly --------------------------------------------------------


def fractional_helly_stats(c: Cover, k: int, cap: int = 40) -> tuple[Fraction, Fraction]:
    """(fraction of intersecting k-subsets, largest intersecting subfamily / size)."""
    if k not in (3, 4):
        raise InputError("k must be 3 or 4")
    n = len(c)
    if n < k:
        raise InputError(f"need at least {k} members")
    if n > cap:
        raise CapExceeded(f"fractional Helly statistics capped at {cap} members")
    hits = c.nerve().f(k - 1)
    alpha = Fraction(hits, comb(n, k))
    depth = max(sum(1 for m in c.members if v in m) for v in c.ambient.vertices)
    return alpha, Fraction(depth, n)


def fractional_helly_bound(alpha: Fraction, n: int) -> float:
    """1 - (1 - alpha)^(1/4) - 1/n."""
    return 1 - float(1 - alpha) ** 0.25 - 1 / n


# --- colorful builders -------------------------------------------------------


@dataclass(frozen=True)
class ColorfulResult:
    tuple_: tuple[int, ...] | None = None
    certificate: MinorCertificate | None = None

    def to_json(self) -> dict:
        if self.tuple_ is not None:
            return {"intersecting": list(self.tuple_)}
        assert self.certificate is not None
        return {"minor": self.certificate.to_json()}


def deep_tuple(c: Cover, size: int) -> tuple[int, ...] | None:
    """First `size` members sharing the smallest vertex that lies in at least `size` members."""
    for v in c.ambient.vertices:
        hits = [i for i, m in enumerate(c.members) if v in m]
        if len(hits) >= size:
            return tuple(hits[:size])
    return None


def generalized_colorful_builder(
    c: Cover,
    singles: Sequence[int],
    a: Sequence[int],
    b: Sequence[int],
    cc: Sequence[int],
    r: int,
) -> ColorfulResult:
    """Either N+1 intersecting members or a K_r model, N = len(singles) + 3.

    `cc` lists the C-members for pairs (1,2), (1,3), ..., (r-1,r) in order.
    Everything happens inside X, the common part of the singleton members.
    """
    n_classes = len(singles) + 3
    if r < 2:
        raise InputError("r must be at least 2")
    if len(a) != r or len(b) != r or len(cc) != comb(r, 2):
        raise InputError("partition sizes must be r, r and r choose 2")
    used = list(singles) + list(a) + list(b) + list(cc)
    if sorted(used) != list(range(len(c))):
        raise InputError("partition must use every member exactly once")
    if not validate_cover(c).valid:
        raise InputError("colorful builder needs a connected cover")
    g = c.ambient
    x = _meet(c, list(singles)) if singles else g.vertex_set
    mem = c.members
    A = [mem[i] & x for i in a]
    B = [mem[i] & x for i in b]
    pairs = list(itertools.combinations(range(r), 2))
    C = {p: mem[i] & x for p, i in zip(pairs, cc)}
    for i, j, p in itertools.product(range(r), range(r), pairs):
        if not A[i] & B[j] & C[p]:
            raise InputError(f"colorful transversal ({a[i]}, {b[j]}, {cc[pairs.index(p)]}) is not intersecting")

    found = deep_tuple(c, n_classes + 1)
    if found is not None:
        return ColorfulResult(tuple_=found)

    parts: list[set[int]] = []
    for i in range(r):
        gi = set(A[i] & B[i])
        for j in range(i + 1, r):
            gi |= A[i] & C[(i, j)]
        parts.append(gi)
    for i, j in pairs:
        if parts[i] & parts[j]:
            raise AssertionError("parts meet although no deep tuple exists")
    extra: list[set[int]] = [set() for _ in range(r)]
    for i, j in pairs:
        allowed = (B[j] & C[(i, j)]) - A[i]
        near = A[i] & C[(i, j)]
        targets = frozenset(v for v in allowed if g.adj[v] & near)
        path = _bfs_path(g, allowed, frozenset(A[j] & allowed), targets)
        if path is None:
            raise AssertionError(f"no connecting path for pair ({i + 1}, {j + 1})")
        extra[j].update(path)
    model = {i + 1: frozenset(parts[i] | extra[i]) for i in range(r)}
    cert = MinorCertificate(complete_graph(r), model)
    problems = certificate_problems(g, cert)
    if problems:
        raise AssertionError("constructed certificate is invalid: " + "; ".join(problems))
    return ColorfulResult(certificate=cert)


def colorful_k5_builder(c: Cover, a: Sequence[int], b: Sequence[int], cc: Sequence[int]) -> ColorfulResult:
    """Four intersecting members, or a K5 model, from a 5/5/10 partition with all colorful triples intersecting."""
    if len(c) != 20:
        raise InputError("the K5 builder needs exactly 20 members")
    return generalized_colorful_builder(c, (), a, b, cc, 5)


def grid_colorful_fixture(r: int = 5, singles: int = 0) -> tuple[Cover, tuple, tuple, tuple, tuple]:
    """Cover of a 3D grid realising the colorful hypothesis with no deep tuple.

    Vertices t(i, j, k) for i, j < r and k < r choose 2, adjacent when they
    differ by one in one coordinate.  A_i, B_j, C_k are the coordinate slabs,
    so every grid vertex lies in exactly three slabs.  Singleton classes are
    nested sets "grid plus the first s vertices of a pendant path".
    """
    nc = comb(r, 2)
    coords = list(itertools.product(range(r), range(r), range(nc)))
    index = {t: n + 1 for n, t in enumerate(coords)}
    edges = []
    for t in coords:
        for axis in range(3):
            u = list(t)
            u[axis] += 1
            if tuple(u) in index:
                edges.append((index[t], index[tuple(u)]))
    grid = frozenset(index.values())
    tail = list(range(len(coords) + 1, len(coords) + singles))
    prev = 1
    for v in tail:
        edges.append((prev, v))
        prev = v
    g = Graph(list(grid) + tail, edges)
    singletons = [grid | frozenset(tail[:s]) for s in range(singles)]
    slabs_a = [frozenset(index[t] for t in coords if t[0] == i) for i in range(r)]
    slabs_b = [frozenset(index[t] for t in coords if t[1] == j) for j in range(r)]
    slabs_c = [frozenset(index[t] for t in coords if t[2] == k) for k in range(nc)]
    c = Cover(g, singletons + slabs_a + slabs_b + slabs_c)
    o = singles
    return (
        c,
        tuple(range(o)),
        tuple(range(o, o + r)),
        tuple(range(o + r, o + 2 * r)),
        tuple(range(o + 2 * r, o + 2 * r + nc)),
    )
