"""Finite simple graphs, minor search with certificates and clique-sum splits.

Graphs are immutable.  Vertex labels are integers; edges are stored as
sorted pairs.  Exact searches (minor testing, Hadwiger number) are bounded
by :class:`MinorCaps`; exceeding a cap raises :class:`CapExceeded` rather
than silently returning an approximation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import networkx as nx

from .errors import CapExceeded, InputError

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[int, ...]
    edges: frozenset[Edge]

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Iterable[int]] = ()):
        vs = set()
        for v in vertices:
            if not isinstance(v, int) or isinstance(v, bool):
                raise InputError(f"vertex label {v!r} is not an integer")
            vs.add(v)
        es = set()
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise InputError(f"self-loop at {u}")
            if u not in vs or v not in vs:
                raise InputError(f"edge {u}-{v} has an endpoint outside the vertex set")
            es.add(_edge(u, v))
        object.__setattr__(self, "vertices", tuple(sorted(vs)))
        object.__setattr__(self, "edges", frozenset(es))

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], vertices: Iterable[int] = ()) -> "Graph":
        edges = [tuple(e) for e in edges]
        vs = set(vertices)
        for e in edges:
            vs.update(e)
        return cls(vs, edges)

    @cached_property
    def adj(self) -> Mapping[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return {v: frozenset(n) for v, n in nbrs.items()}

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertex_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        return cls(g.nodes, g.edges)

    def relabel(self, mapping: Mapping[int, int]) -> "Graph":
        return Graph((mapping[v] for v in self.vertices), ((mapping[u], mapping[v]) for u, v in self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={len(self.vertices)}, edges={self.sorted_edges()})"


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    s = frozenset(s)
    unknown = s - g.vertex_set
    if unknown:
        raise InputError(f"unknown vertices {sorted(unknown)}")
    return Graph(s, (e for e in g.edges if e[0] in s and e[1] in s))


def components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components of ``g`` (or of ``g[within]``), ordered by smallest vertex."""
    allowed = g.vertex_set if within is None else frozenset(within)
    seen: set[int] = set()
    out = []
    for v in sorted(allowed):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in allowed and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def is_connected(g: Graph, within: Iterable[int] | None = None) -> bool:
    """Connectivity of ``g`` or of the induced subgraph on ``within``.  Empty counts as connected."""
    return len(components(g, within)) <= 1


def cut_vertices(g: Graph) -> set[int]:
    """Articulation points via iterative Hopcroft-Tarjan lowpoints."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    counter = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack = [(root, None, iter(sorted(g.adj[root])))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = counter
                    counter += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, v, iter(sorted(g.adj[w]))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if parent is not None:
                    low[parent] = min(low[parent], low[v])
                    if parent != root and low[v] >= disc[parent]:
                        cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return cuts


def is_2_connected(g: Graph) -> bool:
    """2-connectivity; a single edge (K2) counts as 2-connected, a single vertex does not."""
    n = len(g)
    if n < 2 or not is_connected(g):
        return False
    if n == 2:
        return True
    return not cut_vertices(g)


def is_forest(g: Graph) -> bool:
    return len(g.edges) == len(g) - len(components(g))


# --- named constructions -------------------------------------------------


def complete_graph(n: int) -> Graph:
    if n <= 0:
        raise InputError("complete graph needs n >= 1")
    return Graph(range(1, n + 1), itertools.combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("cycle needs n >= 3")
    return Graph(range(1, n + 1), ((i, i % n + 1) for i in range(1, n + 1)))


def path_graph(n: int) -> Graph:
    if n <= 0:
        raise InputError("path needs n >= 1")
    return Graph(range(1, n + 1), ((i, i + 1) for i in range(1, n)))


def complete_multipartite(*sizes: int) -> Graph:
    if not sizes or any(t <= 0 for t in sizes):
        raise InputError("multipartite class sizes must be positive")
    classes = []
    nxt = 1
    for t in sizes:
        classes.append(range(nxt, nxt + t))
        nxt += t
    edges = [
        (u, v)
        for a, b in itertools.combinations(classes, 2)
        for u in a
        for v in b
    ]
    return Graph(range(1, nxt), edges)


def wagner_graph() -> Graph:
    """W8: the 8-cycle plus its four antipodal chords."""
    cyc = cycle_graph(8)
    return Graph(cyc.vertices, list(cyc.edges) + [(i, i + 4) for i in range(1, 5)])


def wheel_graph(spokes: int) -> Graph:
    """Hub 0 joined to every vertex of the cycle 1..spokes."""
    rim = cycle_graph(spokes)
    return Graph((0, *rim.vertices), list(rim.edges) + [(0, i) for i in rim.vertices])


def named_graph(name: str, *params: int) -> Graph:
    builders = {
        "complete": complete_graph,
        "multipartite": complete_multipartite,
        "cycle": cycle_graph,
        "path": path_graph,
        "wheel": wheel_graph,
    }
    if name == "wagner":
        return wagner_graph()
    if name not in builders:
        raise InputError(f"unknown graph family {name!r}")
    if any(p <= 0 for p in params):
        raise InputError("parameters must be positive")
    return builders[name](*params)


# --- minors --------------------------------------------------------------


@dataclass(frozen=True)
class MinorCertificate:
    """A model of ``pattern`` in some host graph: one branch set per pattern vertex."""

    pattern: Graph
    model: Mapping[int, frozenset[int]]

    def branch_sets(self) -> list[frozenset[int]]:
        return [self.model[v] for v in self.pattern.vertices]

    def to_json(self) -> dict:
        return {
            "pattern_edges": [list(e) for e in self.pattern.sorted_edges()],
            "model": {str(v): sorted(self.model[v]) for v in self.pattern.vertices},
        }


def certificate_problems(g: Graph, cert: MinorCertificate) -> list[str]:
    """Independent check of a minor model; an empty list means the certificate is valid."""
    problems = []
    if set(cert.model) != set(cert.pattern.vertices):
        problems.append("model keys differ from pattern vertices")
        return problems
    seen: dict[int, int] = {}
    for v in cert.pattern.vertices:
        bs = cert.model[v]
        if not bs:
            problems.append(f"branch set of {v} is empty")
            continue
        if not bs <= g.vertex_set:
            problems.append(f"branch set of {v} leaves the host graph")
            continue
        for u in bs:
            if u in seen:
                problems.append(f"vertex {u} lies in branch sets of {seen[u]} and {v}")
            seen[u] = v
        if not is_connected(g, bs):
            problems.append(f"branch set of {v} is disconnected")
    if problems:
        return problems
    for a, b in cert.pattern.edges:
        sa, sb = cert.model[a], cert.model[b]
        if not any(g.adj[u] & sb for u in sa):
            problems.append(f"no host edge between branch sets of {a} and {b}")
    return problems


def verify_certificate(g: Graph, cert: MinorCertificate) -> bool:
    return not certificate_problems(g, cert)


@dataclass(frozen=True)
class MinorCaps:
    max_pattern: int = 6
    max_host: int = 16


DEFAULT_CAPS = MinorCaps()


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Host:
    """Bitmask view of a host graph with vertices indexed 0..n-1."""

    def __init__(self, labels: list[int], adj: Mapping[int, Iterable[int]]):
        self.labels = labels
        index = {v: i for i, v in enumerate(labels)}
        self.nbr = [0] * len(labels)
        for v, ns in adj.items():
            if v in index:
                for w in ns:
                    if w in index:
                        self.nbr[index[v]] |= 1 << index[w]

    def nbr_of(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= self.nbr[i]
        return out

    def comps(self, mask: int) -> list[int]:
        out = []
        while mask:
            seed = mask & -mask
            comp = seed
            frontier = seed
            while frontier:
                frontier = self.nbr_of(frontier) & mask & ~comp
                comp |= frontier
            out.append(comp)
            mask &= ~comp
        return out

    def connected_sets(self, v: int, allowed: int) -> Iterator[int]:
        """Every connected subset of ``allowed`` containing bit ``v``, each exactly once."""
        start = 1 << v
        stack = [(start, self.nbr[v] & allowed & ~start, start)]
        while stack:
            s, frontier, banned = stack.pop()
            yield s
            ban = banned
            for u in _bits(frontier):
                ub = 1 << u
                ban |= ub
                new_s = s | ub
                new_frontier = (frontier | self.nbr[u]) & allowed & ~new_s & ~ban
                stack.append((new_s, new_frontier, ban))

    def edge_budget_ok(self, rest: int, done: int, r: int, finished: int) -> bool:
        """Enough edges left for r more connected parts meeting each other and ``finished`` parts."""
        inner = sum(bin(self.nbr[i] & rest).count("1") for i in _bits(rest)) // 2
        cross = sum(bin(self.nbr[i] & done).count("1") for i in _bits(rest))
        need_inner = r * (r - 1) // 2 + bin(rest).count("1") - r
        return inner >= need_inner and cross >= r * finished

    def to_labels(self, mask: int) -> frozenset[int]:
        return frozenset(self.labels[i] for i in _bits(mask))


def _pattern_embedding(q_adj: list[int], pattern: Graph) -> dict[int, int] | None:
    """Bijection pattern vertex -> part index with every pattern edge realised in the quotient."""
    pv = list(pattern.vertices)
    k = len(pv)
    order = sorted(range(k), key=lambda i: -pattern.degree(pv[i]))
    qdeg = [bin(m).count("1") for m in q_adj]
    assign: dict[int, int] = {}
    used = 0

    def rec(pos: int) -> bool:
        nonlocal used
        if pos == k:
            return True
        p = pv[order[pos]]
        for part in range(k):
            if used >> part & 1 or qdeg[part] < pattern.degree(p):
                continue
            ok = all(
                q_adj[part] >> assign[w] & 1 for w in pattern.adj[p] if w in assign
            )
            if not ok:
                continue
            assign[p] = part
            used |= 1 << part
            if rec(pos + 1):
                return True
            del assign[p]
            used &= ~(1 << part)
        return False

    return dict(assign) if rec(0) else None


def _partition_search(host: _Host, universe: int, pattern: Graph) -> dict[int, int] | None:
    """Partition the connected vertex set ``universe`` into |V(pattern)| connected parts
    whose quotient contains ``pattern``.  Returns pattern vertex -> part mask."""
    k = len(pattern)
    m = len(pattern.edges)
    complete = m == k * (k - 1) // 2
    parts: list[int] = []
    parts_mask = 0

    def rec(unassigned: int) -> dict[int, int] | None:
        nonlocal parts_mask
        left = k - len(parts)
        if left == 0:
            if unassigned:
                return None
            q_adj = [
                sum(1 << j for j, b in enumerate(parts) if j != i and host.nbr_of(a) & b)
                for i, a in enumerate(parts)
            ]
            emb = _pattern_embedding(q_adj, pattern)
            if emb is None:
                return None
            return {p: parts[i] for p, i in emb.items()}
        if bin(unassigned).count("1") < left:
            return None
        v = (unassigned & -unassigned).bit_length() - 1
        for s in host.connected_sets(v, unassigned):
            ns = host.nbr_of(s)
            if complete and any(not (ns & b) for b in parts):
                continue
            rest = unassigned & ~s
            if left == 1:
                if rest:
                    continue
            else:
                if not rest:
                    continue
                comps = host.comps(rest)
                if len(comps) > left - 1:
                    continue
                if complete and not host.edge_budget_ok(rest, parts_mask | s, left - 1, len(parts) + 1):
                    continue
                if complete:
                    everything = parts + [s]
                    if any(not (host.nbr_of(c) & b) for c in comps for b in everything):
                        continue
            parts.append(s)
            parts_mask |= s
            found = rec(rest)
            parts.pop()
            parts_mask &= ~s
            if found is not None:
                return found
        return None

    return rec(universe)


def _reduce_for_clique(labels: set[int], adj: dict[int, set[int]], k: int) -> list[tuple]:
    """Shrink a host graph in place while preserving K_k minors; returns an undo log.

    Degree <= 1 vertices are deleted (k >= 3); degree-2 vertices are suppressed
    by joining their neighbours (k >= 4).
    """
    log: list[tuple] = []
    changed = True
    while changed:
        changed = False
        for v in sorted(labels):
            d = len(adj[v])
            if k >= 3 and d <= 1:
                for w in adj[v]:
                    adj[w].discard(v)
                labels.discard(v)
                del adj[v]
                changed = True
            elif k >= 4 and d == 2:
                a, b = sorted(adj[v])
                adj[a].discard(v)
                adj[b].discard(v)
                labels.discard(v)
                del adj[v]
                added = b not in adj[a]
                adj[a].add(b)
                adj[b].add(a)
                log.append((v, a, b, added))
                changed = True
    return log


def _undo_reduction(model: dict[int, frozenset[int]], log: list[tuple]) -> dict[int, frozenset[int]]:
    model = dict(model)
    for v, a, b, _added in reversed(log):
        owner = {u: p for p, bs in model.items() for u in bs}
        pa, pb = owner.get(a), owner.get(b)
        if pa is not None and pb is not None:
            # v sits on the edge a-b: keep it with a's set so both connectivity
            # (pa == pb) and the adjacency (pa != pb) survive
            model[pa] = model[pa] | {v}
    return model


def _search_connected_host(g: Graph, comp: frozenset[int], pattern: Graph) -> dict[int, frozenset[int]] | None:
    k = len(pattern)
    complete = len(pattern.edges) == k * (k - 1) // 2
    adj = {v: set(g.adj[v] & comp) for v in comp}
    labels = set(comp)
    log: list[tuple] = []
    if complete and k >= 3:
        log = _reduce_for_clique(labels, adj, k)
    if len(labels) < k:
        return None
    edge_count = sum(len(n) for n in adj.values()) // 2
    if edge_count < len(pattern.edges):
        return None
    host = _Host(sorted(labels), adj)
    for piece in host.comps((1 << len(host.labels)) - 1):
        if bin(piece).count("1") < k:
            continue
        found = _partition_search(host, piece, pattern)
        if found is not None:
            model = {p: host.to_labels(mask) for p, mask in found.items()}
            return _undo_reduction(model, log)
    return None


def _find_minor(g: Graph, h: Graph) -> MinorCertificate | None:
    if len(h) == 0:
        return MinorCertificate(h, {})
    if len(h) > len(g) or len(h.edges) > len(g.edges):
        return None
    h_comps = components(h)
    g_comps = [c for c in components(g)]
    if len(h_comps) == 1:
        for comp in g_comps:
            if len(comp) < len(h):
                continue
            model = _search_connected_host(g, comp, h)
            if model is not None:
                return MinorCertificate(h, model)
        return None
    # disconnected pattern: distribute its components over host components
    for assignment in itertools.product(range(len(g_comps)), repeat=len(h_comps)):
        model: dict[int, frozenset[int]] = {}
        ok = True
        for gi, comp in enumerate(g_comps):
            mine = [hc for hc, a in zip(h_comps, assignment) if a == gi]
            if not mine:
                continue
            sub = induced_subgraph(h, frozenset().union(*mine))
            if len(sub) > len(comp):
                ok = False
                break
            found = _search_connected_host(g, comp, sub)
            if found is None:
                ok = False
                break
            model.update(found)
        if ok:
            return MinorCertificate(h, model)
    return None


def has_minor(g: Graph, h: Graph, caps: MinorCaps = DEFAULT_CAPS) -> MinorCertificate | None:
    """Exact minor test: a verified certificate if ``h`` is a minor of ``g``, else None."""
    if len(h) > caps.max_pattern:
        raise CapExceeded(f"pattern has {len(h)} vertices, cap is {caps.max_pattern}")
    if len(g) > caps.max_host:
        raise CapExceeded(f"host has {len(g)} vertices, cap is {caps.max_host}")
    cert = _find_minor(g, h)
    if cert is not None:
        problems = certificate_problems(g, cert)
        if problems:
            raise AssertionError(f"minor search produced an invalid certificate: {problems}")
    return cert


def is_complete(g: Graph) -> bool:
    n = len(g)
    return len(g.edges) == n * (n - 1) // 2


def hadwiger_number(g: Graph, caps: MinorCaps = DEFAULT_CAPS) -> tuple[int, MinorCertificate]:
    """Largest s with K_s a minor of g, together with a K_s certificate."""
    if len(g) > caps.max_host:
        raise CapExceeded(f"host has {len(g)} vertices, cap is {caps.max_host}")
    if len(g) == 0:
        return 0, MinorCertificate(Graph(), {})
    if is_complete(g):
        kn = complete_graph(len(g))
        return len(g), MinorCertificate(kn, {i: frozenset([v]) for i, v in zip(kn.vertices, g.vertices)})
    best = MinorCertificate(complete_graph(1), {1: frozenset([g.vertices[0]])})
    s = 2
    while s <= len(g):
        cert = _find_minor(g, complete_graph(s))
        if cert is None:
            break
        best = cert
        s += 1
    if certificate_problems(g, best):
        raise AssertionError("hadwiger search produced an invalid certificate")
    return len(best.pattern), best


# --- clique sums ---------------------------------------------------------


@dataclass(frozen=True)
class CliqueSumSplit:
    left: frozenset[int]
    right: frozenset[int]

    @property
    def clique(self) -> frozenset[int]:
        return self.left & self.right


def split_problems(g: Graph, split: CliqueSumSplit) -> list[str]:
    problems = []
    a, b = split.left, split.right
    if a | b != g.vertex_set:
        problems.append("sides do not cover the vertex set")
    s = a & b
    if not s:
        problems.append("sides are disjoint")
    if any(not g.has_edge(u, v) for u, v in itertools.combinations(sorted(s), 2)):
        problems.append("intersection is not a clique")
    if any(g.adj[u] & (b - a) for u in a - b):
        problems.append("an edge crosses between the two sides")
    return problems


def find_clique_sum_split(g: Graph) -> CliqueSumSplit | None:
    """A nontrivial clique-sum decomposition, using the smallest clique separator found."""
    if not is_connected(g) or len(g) == 0:
        raise InputError("clique-sum splitting needs a connected graph")
    cliques = set()
    for maximal in nx.find_cliques(g.to_networkx()):
        for r in range(1, len(maximal) + 1):
            for sub in itertools.combinations(sorted(maximal), r):
                cliques.add(sub)
    for sep in sorted(cliques, key=lambda c: (len(c), c)):
        rest = g.vertex_set - set(sep)
        comps = components(g, rest)
        if len(comps) < 2:
            continue
        left = comps[0] | set(sep)
        right = frozenset().union(*comps[1:]) | set(sep)
        return CliqueSumSplit(frozenset(left), frozenset(right))
    return None


# --- serialisation -------------------------------------------------------


def to_graph6(g: Graph) -> str:
    """graph6 string; vertices are renumbered 0..n-1 in sorted label order."""
    index = {v: i for i, v in enumerate(g.vertices)}
    h = nx.Graph()
    h.add_nodes_from(range(len(g)))
    h.add_edges_from((index[u], index[v]) for u, v in g.edges)
    return nx.to_graph6_bytes(h, header=False).decode("ascii").strip()


def from_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    try:
        h = nx.from_graph6_bytes(text.encode("ascii"))
    except Exception as exc:  # networkx raises a mix of NetworkXError / ValueError
        raise InputError(f"bad graph6 string {text!r}: {exc}") from exc
    return Graph.from_networkx(h)


def parse_edge_list(text: str) -> Graph:
    """``u v`` per line; a line with a single label declares an isolated vertex; '#' starts a comment."""
    vertices: set[int] = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            labels = [int(p) for p in parts]
        except ValueError as exc:
            raise InputError(f"line {lineno}: non-integer label") from exc
        if len(labels) == 1:
            vertices.add(labels[0])
        elif len(labels) == 2:
            edges.append(tuple(labels))
            vertices.update(labels)
        else:
            raise InputError(f"line {lineno}: expected 'u v'")
    return Graph(vertices, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{u} {v}" for u, v in g.sorted_edges()]
    isolated = [str(v) for v in g.vertices if not g.adj[v]]
    return "\n".join(isolated + lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Accept either a graph6 line or an edge list."""
    stripped = text.strip()
    if stripped and "\n" not in stripped and " " not in stripped and not stripped.lstrip("-").isdigit():
        return from_graph6(stripped)
    return parse_edge_list(text)
