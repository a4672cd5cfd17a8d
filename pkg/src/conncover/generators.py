"""Seeded random instances: planar and minor-free graphs, clique-sums and connected covers."""

from __future__ import annotations

import itertools
import random
from collections import deque

import networkx as nx

from .covers import Cover, validate_cover
from .graphs import CliqueSumSplit, Graph, is_connected


def _connected(n: int, edges) -> bool:
    return is_connected(Graph(range(1, n + 1), edges))


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    """Erdős–Rényi G(n, p) on labels 1..n, retried until connected."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    while True:
        edges = [e for e in pairs if rng.random() < p]
        if _connected(n, edges):
            return Graph(range(1, n + 1), edges)


def _thin_out(rng: random.Random, n: int, edges: list, keep: float) -> Graph:
    """Delete each edge with probability 1 - keep unless that disconnects the graph."""
    edges = list(edges)
    rng.shuffle(edges)
    out = list(edges)
    for e in edges:
        if rng.random() >= keep:
            trial = [f for f in out if f != e]
            if _connected(n, trial):
                out = trial
    return Graph(range(1, n + 1), out)


def random_maximal_planar(rng: random.Random, n: int) -> list[tuple[int, int]]:
    """Stacked triangulation: insert each new vertex into a random triangular face."""
    if n < 3:
        return list(itertools.combinations(range(1, n + 1), 2))
    edges = [(1, 2), (1, 3), (2, 3)]
    tri = [(1, 2, 3), (1, 2, 3)]  # inner and outer face
    for v in range(4, n + 1):
        a, b, c = tri.pop(rng.randrange(len(tri)))
        edges += [(a, v), (b, v), (c, v)]
        tri += [(a, b, v), (a, c, v), (b, c, v)]
    return edges


def random_planar_graph(rng: random.Random, n_max: int = 10, n_min: int = 2) -> Graph:
    """Connected planar graph: alternately Erdős–Rényi conditioned on planarity
    (by retry) and a thinned random stacked triangulation."""
    n = rng.randint(n_min, n_max)
    if rng.random() < 0.5:
        p = rng.uniform(0.2, 0.6)
        for _ in range(200):
            g = random_connected_graph(rng, n, p)
            if nx.check_planarity(g.to_networkx())[0]:
                return g
    return _thin_out(rng, n, random_maximal_planar(rng, n), rng.uniform(0.5, 1.0))


def random_k4_free_graph(rng: random.Random, n_max: int = 10, n_min: int = 2) -> Graph:
    """Connected subgraph of a random 2-tree (so no K4 minor)."""
    n = rng.randint(n_min, n_max)
    if n == 1:
        return Graph([1], [])
    edges = [(1, 2)]
    for v in range(3, n + 1):
        a, b = rng.choice(edges)
        edges += [(a, v), (b, v)]
    return _thin_out(rng, n, edges, rng.uniform(0.5, 1.0))


def random_connected_set(rng: random.Random, g: Graph, size: int) -> frozenset[int]:
    """Grow from a random vertex by adding random boundary vertices."""
    s = {rng.choice(g.vertices)}
    while len(s) < size:
        boundary = sorted(set().union(*(g.adj[v] for v in s)) - s)
        if not boundary:
            break
        s.add(rng.choice(boundary))
    return frozenset(s)


def random_connected_cover(rng: random.Random, g: Graph, max_members: int = 8, tries: int = 200) -> Cover:
    """Greedy rejection: keep adding random connected sets while the family stays a connected cover."""
    target = rng.randint(1, max_members)
    members: list[frozenset[int]] = []
    for _ in range(tries):
        if len(members) >= target:
            break
        cand = random_connected_set(rng, g, rng.randint(1, len(g)))
        if cand in members:
            continue
        if validate_cover(Cover(g, members + [cand])).valid:
            members.append(cand)
    if not members:
        members = [g.vertex_set]
    return Cover(g, members)


def random_clique_sum(rng: random.Random, max_part: int = 8) -> tuple[Graph, Graph, Graph, CliqueSumSplit]:
    """Glue two random connected graphs along a common clique.

    Returns (G, A, B, split) with A = G[left] and B = G[right].
    """
    while True:
        na, nb = rng.randint(2, max_part), rng.randint(2, max_part)
        a = random_connected_graph(rng, na, rng.uniform(0.3, 0.9))
        b = random_connected_graph(rng, nb, rng.uniform(0.3, 0.9))
        ca = max(nx.find_cliques(a.to_networkx()), key=len)
        cb = max(nx.find_cliques(b.to_networkx()), key=len)
        k = rng.randint(1, min(len(ca), len(cb)))
        qa = rng.sample(sorted(ca), k)
        qb = rng.sample(sorted(cb), k)
        # B's vertices are renamed after A's; its clique is identified with A's
        rename = {}
        nxt = na + 1
        for v in b.vertices:
            if v in qb:
                rename[v] = qa[qb.index(v)]
            else:
                rename[v] = nxt
                nxt += 1
        edges = set(a.edges) | {tuple(sorted((rename[u], rename[v]))) for u, v in b.edges}
        g = Graph(range(1, nxt), edges)
        left = frozenset(a.vertices)
        right = frozenset(rename.values())
        if left == g.vertex_set or right == g.vertex_set:
            continue
        return g, a, b.relabel(rename), CliqueSumSplit(left, right)


def random_spanning_tree(rng: random.Random, g: Graph) -> dict[int, int | None]:
    """Parent map of a BFS tree from a random root, neighbours shuffled."""
    root = rng.choice(g.vertices)
    parent: dict[int, int | None] = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        nbrs = sorted(g.adj[u] - parent.keys())
        rng.shuffle(nbrs)
        for v in nbrs:
            parent[v] = u
            queue.append(v)
    return parent


def random_subtree_colorful_cover(
    rng: random.Random, g: Graph, r: int = 5, spine: int = 4, tries: int = 200, trees: int = 20
) -> tuple[Cover, tuple, tuple, tuple] | None:
    """Cover with classes of sizes r, r and r choose 2 by subtrees of a spanning tree.

    Q is a short root path of the tree.  A- and B-members are root subtrees
    containing Q; each C-member is a downward path hanging from a vertex of Q.
    Subtrees meet in subtrees, so this is a connected cover of g, and every
    colorful triple meets at a vertex of Q.  Keeping Q short but nontrivial
    keeps the nerve small.  Returns None if no tree out of `trees` yields
    enough distinct members.
    """
    for _ in range(trees):
        out = _subtree_colorful_attempt(rng, g, r, spine, tries)
        if out is not None:
            return out
    return None


def _subtree_colorful_attempt(rng: random.Random, g: Graph, r: int, spine: int, tries: int):
    parent = random_spanning_tree(rng, g)
    root = next(v for v, p in parent.items() if p is None)
    children: dict[int, list[int]] = {v: [] for v in parent}
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    q = [root]
    while len(q) < spine and children[q[-1]]:
        q.append(rng.choice(sorted(children[q[-1]])))
    nc = r * (r - 1) // 2

    def up_to(v: int | None, stop: int | None) -> set[int]:
        s = set()
        while v is not None and v != stop:
            s.add(v)
            v = parent[v]
        return s

    def below(v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(children[u])
        return sorted(out)

    def draw(pool: list[frozenset[int]], count: int, make) -> bool:
        for _ in range(tries):
            if len(pool) == count:
                return True
            m = frozenset(make())
            if m not in pool:
                pool.append(m)
        return len(pool) == count

    def root_subtree() -> set[int]:
        s = set(q)
        for v in rng.sample(g.vertices, rng.randint(0, max(1, len(g) // 4))):
            s |= up_to(v, None)
        return s

    def hanging_path() -> set[int]:
        top = rng.choice(q)
        return up_to(rng.choice(below(top)), parent[top])

    ab: list[frozenset[int]] = []
    cs: list[frozenset[int]] = []
    if not draw(ab, 2 * r, root_subtree) or not draw(cs, nc, hanging_path):
        return None
    members = ab + [m for m in cs if m not in ab]
    if len(members) != 2 * r + nc:
        return None
    return Cover(g, members), tuple(range(r)), tuple(range(r, 2 * r)), tuple(range(2 * r, 2 * r + nc))
