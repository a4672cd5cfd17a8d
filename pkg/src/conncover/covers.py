"""Connected covers in graphs, their nerves, and bounds on homological dimension.

A cover is an ordered family of distinct nonempty vertex subsets of an
ambient graph, each standing for the induced subgraph on it.  It is a
*connected* cover when every nonempty intersection of members induces a
connected subgraph.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import networkx as nx

from . import simplicial as sc
from .errors import InputError, PreconditionError
from .graphs import (
    DEFAULT_CAPS,
    CliqueSumSplit,
    Graph,
    MinorCaps,
    MinorCertificate,
    components,
    find_clique_sum_split,
    from_graph6,
    hadwiger_number,
    induced_subgraph,
    is_complete,
    is_connected,
    is_forest,
    split_problems,
    to_graph6,
)


@dataclass(frozen=True)
class Cover:
    ambient: Graph
    members: tuple[frozenset[int], ...]

    def __init__(self, ambient: Graph, members: Iterable[Iterable[int]]):
        ms = tuple(frozenset(m) for m in members)
        for i, m in enumerate(ms):
            if not m:
                raise InputError(f"member {i} is empty")
            if not m <= ambient.vertex_set:
                raise InputError(f"member {i} has vertices outside the ambient graph")
        if len(set(ms)) != len(ms):
            raise InputError("cover members must be distinct vertex sets")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "members", ms)

    def __len__(self) -> int:
        return len(self.members)

    def intersection(self, indices: Iterable[int]) -> frozenset[int]:
        idx = list(indices)
        if not idx:
            return self.ambient.vertex_set
        out = self.members[idx[0]]
        for i in idx[1:]:
            out = out & self.members[i]
        return out

    def nerve(self) -> sc.SimplicialComplex:
        return sc.nerve(self.members)

    def member_graph(self, i: int) -> Graph:
        return induced_subgraph(self.ambient, self.members[i])

    def sorted_members(self) -> list[list[int]]:
        return sorted(sorted(m) for m in self.members)


def nerve(c: Cover) -> sc.SimplicialComplex:
    return c.nerve()


# --- validation ----------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violation: tuple[int, ...] | None = None
    components: tuple[tuple[int, ...], ...] = ()

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "violation": list(self.violation) if self.violation is not None else None,
            "components": [list(c) for c in self.components],
        }


def validate_cover(c: Cover) -> ValidationReport:
    """Check connectivity of every nonempty intersection of members.

    Every such intersection appears in the closure of the member sets under
    pairwise intersection, so we grow that closure level by level (level l
    holds sets first reached as an intersection of l members) and test each
    distinct set once.  The reported violation has the fewest members.
    """
    g = c.ambient
    witness: dict[frozenset[int], tuple[int, ...]] = {}
    level: list[frozenset[int]] = []
    for i, m in enumerate(c.members):
        if m not in witness:
            witness[m] = (i,)
            level.append(m)
    while level:
        for x in level:
            comps = components(g, x)
            if len(comps) > 1:
                return ValidationReport(False, witness[x], tuple(tuple(sorted(k)) for k in comps))
        nxt: list[frozenset[int]] = []
        for x in level:
            sigma = witness[x]
            for j, m in enumerate(c.members):
                if j in sigma:
                    continue
                y = x & m
                if y and y not in witness:
                    witness[y] = tuple(sorted(sigma + (j,)))
                    nxt.append(y)
        level = nxt
    return ValidationReport(True)


def validate_cover_bruteforce(c: Cover) -> ValidationReport:
    """Reference checker: every subfamily, smallest first."""
    for size in range(1, len(c) + 1):
        for sigma in itertools.combinations(range(len(c)), size):
            x = c.intersection(sigma)
            if x:
                comps = components(c.ambient, x)
                if len(comps) > 1:
                    return ValidationReport(False, sigma, tuple(tuple(sorted(k)) for k in comps))
    return ValidationReport(True)


def is_connected_cover(c: Cover) -> bool:
    return validate_cover(c).valid


# --- constructions -------------------------------------------------------


def extend_to_partition(cert: MinorCertificate, g: Graph) -> list[frozenset[int]]:
    """Grow branch sets until they partition V(g): each leftover vertex joins the
    lexicographically smallest adjacent branch set, in synchronous rounds."""
    if not is_connected(g):
        raise InputError("partition extension needs a connected graph")
    sets = [set(b) for b in cert.branch_sets()]
    owner = {v: i for i, b in enumerate(sets) for v in b}
    while len(owner) < len(g):
        joins = {}
        for v in g.vertices:
            if v in owner:
                continue
            adjacent = {owner[w] for w in g.adj[v] if w in owner}
            if adjacent:
                joins[v] = min(adjacent, key=lambda i: sorted(sets[i]))
        if not joins:
            raise InputError("leftover vertices are not reachable from the branch sets")
        for v, i in joins.items():
            sets[i].add(v)
            owner[v] = i
    return [frozenset(s) for s in sets]


def canonical_cover_from_minor(cert: MinorCertificate, g: Graph) -> Cover:
    """Complements of the parts of a K_{d+2} model: a connected cover whose nerve is a (d+1)-simplex boundary."""
    k = len(cert.pattern)
    if k < 2 or not is_complete(cert.pattern):
        raise InputError("canonical cover needs a complete pattern on at least 2 vertices")
    parts = extend_to_partition(cert, g)
    return Cover(g, [g.vertex_set - p for p in parts])


def transport_cover(c: Cover, cert: MinorCertificate, g: Graph) -> Cover:
    """Push a cover of the pattern graph through a minor model into the host graph."""
    if c.ambient.vertex_set != frozenset(cert.pattern.vertices):
        raise InputError("cover ambient graph must be the certificate's pattern")
    return Cover(g, [frozenset().union(*(cert.model[w] for w in m)) for m in c.members])


@dataclass(frozen=True)
class Restriction:
    """A derived cover plus, for each of its members, the source member indices producing it."""

    cover: Cover | None
    sources: tuple[tuple[int, ...], ...]

    def family_nerve(self) -> sc.SimplicialComplex:
        """Nerve of the undeduplicated family, labelled by source member indices."""
        if self.cover is None:
            return sc.SimplicialComplex(frozenset({0}))
        sets: dict[int, frozenset[int]] = {}
        for m, srcs in zip(self.cover.members, self.sources):
            for s in srcs:
                sets[s] = m
        faces = {0}
        keys = sorted(sets)
        stack = [(0, None, -1)]
        while stack:
            face, meet, last = stack.pop()
            for pos in range(last + 1, len(keys)):
                new = sets[keys[pos]] if meet is None else meet & sets[keys[pos]]
                if new:
                    f = face | (1 << keys[pos])
                    faces.add(f)
                    stack.append((f, new, pos))
        return sc.SimplicialComplex(frozenset(faces))


def _restrict(c: Cover, region: frozenset[int], ambient: Graph, skip: int | None = None) -> Restriction:
    grouped: dict[frozenset[int], list[int]] = {}
    for i, m in enumerate(c.members):
        if i == skip:
            continue
        meet = m & region
        if meet:
            grouped.setdefault(meet, []).append(i)
    if not grouped:
        return Restriction(None, ())
    keys = list(grouped)
    return Restriction(Cover(ambient, keys), tuple(tuple(grouped[k]) for k in keys))


def link_restriction_cover(c: Cover, x: int) -> Restriction:
    """Members G_i ∩ G_x (i != x, nonempty) as a cover of G_x; its nerve is the link of x."""
    if not validate_cover(c).valid:
        raise InputError("link restriction needs a connected cover")
    if not 0 <= x < len(c):
        raise InputError(f"no member {x}")
    gx = c.member_graph(x)
    r = _restrict(c, c.members[x], gx, skip=x)
    if r.cover is not None and r.family_nerve() != sc.link(c.nerve(), x):
        raise AssertionError("restriction nerve differs from the link")
    return r


def clique_sum_restriction(c: Cover, split: CliqueSumSplit) -> tuple[Restriction, Restriction]:
    problems = split_problems(c.ambient, split)
    if problems:
        raise InputError("invalid clique-sum split: " + "; ".join(problems))
    if not validate_cover(c).valid:
        raise InputError("clique-sum restriction needs a connected cover")
    a = induced_subgraph(c.ambient, split.left)
    b = induced_subgraph(c.ambient, split.right)
    ra, rb = _restrict(c, split.left, a), _restrict(c, split.right, b)
    for r in (ra, rb):
        if r.cover is not None and not validate_cover(r.cover).valid:
            raise AssertionError("clique-sum restriction is not a connected cover")
    return ra, rb


def minimal_cover_reduce(c: Cover, d: int) -> Cover:
    """Greedily delete members while the reduced homology in dimension d stays nonzero."""
    if sc.betti_at(c.nerve(), d) == 0:
        raise PreconditionError(f"the nerve has no homology in dimension {d}")
    members = list(c.members)
    changed = True
    while changed:
        changed = False
        for i in range(len(members)):
            trial = members[:i] + members[i + 1:]
            if trial and sc.betti_at(sc.nerve(trial), d):
                members = trial
                changed = True
                break
    return Cover(c.ambient, members)


# --- searching for covers with homology ---------------------------------


class SearchStatus(str, Enum):
    FOUND = "found"
    ABSENT = "absent-within-enumerated-space"
    EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class SearchBudget:
    max_members: int = 6
    max_pool: int = 64
    max_families: int = 200_000


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    cover: Cover | None = None
    families_checked: int = 0
    pool_size: int = 0
    pool_truncated: bool = False


def connected_subsets(g: Graph, limit: int | None = None) -> tuple[list[frozenset[int]], bool]:
    """Connected vertex subsets ordered by (size, sorted labels); second value flags truncation."""
    seen: set[frozenset[int]] = set()
    layer = {frozenset([v]) for v in g.vertices}
    out: list[frozenset[int]] = []
    while layer:
        for s in sorted(layer, key=sorted):
            if limit is not None and len(out) >= limit:
                return out, True
            out.append(s)
        seen |= layer
        nxt = set()
        for s in layer:
            nb = frozenset().union(*(g.adj[v] for v in s)) - s
            for w in nb:
                t = s | {w}
                if t not in seen:
                    nxt.add(t)
        layer = nxt
    return out, False


def search_cover_with_homology(g: Graph, d: int, budget: SearchBudget = SearchBudget()) -> SearchResult:
    """Look for a connected cover whose nerve has nonzero reduced homology in dimension d."""
    if not is_connected(g) or len(g) == 0:
        raise InputError("search needs a connected graph")
    if d < 0:
        raise InputError("dimension must be >= 0")
    pool, truncated = connected_subsets(g, budget.max_pool + 1)
    pool = [s for s in pool if s != g.vertex_set]
    if len(pool) > budget.max_pool:
        pool = pool[: budget.max_pool]
        truncated = True
    checked = 0
    exhausted = False

    def valid_extension(family: list[frozenset[int]], new: frozenset[int]) -> bool:
        # only intersections involving the new member can fail
        stack = [(-1, new)]
        while stack:
            last, meet = stack.pop()
            for j in range(last + 1, len(family)):
                m = meet & family[j]
                if m:
                    if not is_connected(g, m):
                        return False
                    stack.append((j, m))
        return is_connected(g, new)

    def rec(family: list[frozenset[int]], start: int, size: int) -> Cover | None:
        nonlocal checked, exhausted
        if len(family) == size:
            checked += 1
            if checked > budget.max_families:
                exhausted = True
                return None
            if sc.betti_at(sc.nerve(family), d):
                return Cover(g, family)
            return None
        for i in range(start, len(pool) - (size - len(family) - 1)):
            if exhausted:
                return None
            cand = pool[i]
            if not valid_extension(family, cand):
                continue
            family.append(cand)
            found = rec(family, i + 1, size)
            family.pop()
            if found is not None:
                return found
        return None

    # smallest families first, so witnesses come out minimal in size
    for size in range(d + 2, budget.max_members + 1):
        found = rec([], 0, size)
        if found is not None:
            return SearchResult(SearchStatus.FOUND, found, checked, len(pool), truncated)
        if exhausted:
            break
    status = SearchStatus.EXHAUSTED if exhausted or truncated else SearchStatus.ABSENT
    return SearchResult(status, None, checked, len(pool), truncated)


# --- homological dimension bounds ---------------------------------------


@dataclass(frozen=True)
class GammaBounds:
    lower: int
    lower_witness: Cover | None
    witness_dim: int
    upper: int | None
    upper_rule: str
    hadwiger: int
    search_status: SearchStatus | None = None

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper if self.upper is not None else "unknown",
            "upper_rule": self.upper_rule,
            "hadwiger": self.hadwiger,
            "witness": cover_to_json(self.lower_witness) if self.lower_witness else None,
            "witness_dim": self.witness_dim,
            "search_status": self.search_status.value if self.search_status else None,
        }


def is_complete_multipartite(g: Graph) -> bool:
    """Non-adjacency is an equivalence relation (the complement is a disjoint union of cliques)."""
    comp = nx.complement(g.to_networkx())
    for part in nx.connected_components(comp):
        k = len(part)
        if comp.subgraph(part).number_of_edges() != k * (k - 1) // 2:
            return False
    return True


def _is_planar(g: Graph) -> bool:
    return nx.check_planarity(g.to_networkx())[0]


def gamma_upper_bound(g: Graph, hadwiger: int | None = None, caps: MinorCaps = DEFAULT_CAPS) -> tuple[int | None, str]:
    """Upper bound on the homological dimension from structure theorems, cheapest rule first."""
    if len(g) == 1:
        return -1, "single vertex"
    if is_forest(g):
        return 0, "forest"
    if hadwiger is None:
        hadwiger = hadwiger_number(g, caps)[0]
    if hadwiger <= 3:
        return 1, "K4-free clique-sum"
    if hadwiger == 4:
        if _is_planar(g):
            return 2, "planar"
        return 2, "K5-free Wagner decomposition"
    if is_complete(g):
        return len(g) - 2, "complete"
    if is_complete_multipartite(g):
        return hadwiger - 2, "complete multipartite"
    split = find_clique_sum_split(g)
    if split is not None:
        ua, _ = gamma_upper_bound(induced_subgraph(g, split.left), caps=caps)
        ub, _ = gamma_upper_bound(induced_subgraph(g, split.right), caps=caps)
        if ua is not None and ub is not None:
            return max(ua, ub), "clique-sum"
    return None, "unknown"


def gamma_bounds(
    g: Graph,
    budget: SearchBudget = SearchBudget(),
    exhaustive: bool = False,
    caps: MinorCaps = DEFAULT_CAPS,
) -> GammaBounds:
    """Constructive lower bound (Hadwiger number - 2) and a rule-based upper bound."""
    if len(g) == 0 or not is_connected(g):
        raise InputError("homological dimension bounds need a connected graph")
    if len(g) == 1:
        return GammaBounds(-1, None, -1, -1, "single vertex", 1)
    h, cert = hadwiger_number(g, caps)
    lower = h - 2
    witness = canonical_cover_from_minor(cert, g)
    if not validate_cover(witness).valid or sc.betti_at(witness.nerve(), lower) == 0:
        raise AssertionError("canonical cover failed to witness the lower bound")
    upper, rule = gamma_upper_bound(g, h, caps)
    status = None
    if exhaustive and (upper is None or upper > lower):
        top = upper if upper is not None else len(g) - 2
        d = lower + 1
        while d <= top:
            res = search_cover_with_homology(g, d, budget)
            status = res.status
            if res.status is not SearchStatus.FOUND:
                break
            lower, witness = d, res.cover
            d += 1
    return GammaBounds(lower, witness, lower, upper, rule, h, status)


# --- JSON ----------------------------------------------------------------


def cover_to_json(c: Cover) -> dict:
    """graph6 for the ambient graph; member labels are graph6 indices (sorted-label order)."""
    index = {v: i for i, v in enumerate(c.ambient.vertices)}
    return {
        "graph": to_graph6(c.ambient),
        "members": sorted(sorted(index[v] for v in m) for m in c.members),
    }


def cover_from_json(data: dict | str) -> Cover:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad cover JSON: {exc}") from exc
    if not isinstance(data, dict) or "graph" not in data or "members" not in data:
        raise InputError('cover JSON needs "graph" and "members"')
    g = from_graph6(data["graph"])
    members = data["members"]
    if not isinstance(members, list) or not all(isinstance(m, list) for m in members):
        raise InputError("members must be a list of label lists")
    return Cover(g, members)
