"""Combinatorial planar embeddings, thickening, face filling, and the face-filling pipeline.

Embeddings are rotation systems: for each vertex, the cyclic order of its
neighbours.  Faces are traced by the rule "after the dart u->v take
v->w, where w follows u in the rotation at v".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import networkx as nx

from . import simplicial as sc
from .covers import Cover, validate_cover
from .errors import CapExceeded, InputError
from .graphs import Graph, components, induced_subgraph, is_2_connected, is_connected

Dart = tuple[int, int]

DEFAULT_EMBED_CAP = 400


@dataclass(frozen=True)
class Face:
    walk: tuple[Dart, ...]

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.walk)

    @property
    def cycle(self) -> tuple[int, ...]:
        """Vertices in walk order."""
        return tuple(u for u, _ in self.walk)

    def key(self) -> tuple:
        return (tuple(sorted(self.vertex_set)), self.walk)


@dataclass(frozen=True)
class Embedding:
    graph: Graph
    rotation: Mapping[int, tuple[int, ...]]

    def __post_init__(self):
        for v in self.graph.vertices:
            rot = self.rotation.get(v)
            if rot is None:
                raise InputError(f"rotation missing for vertex {v}")
            if len(rot) != len(set(rot)) or set(rot) != set(self.graph.adj[v]):
                raise InputError(f"rotation at {v} must list its neighbours exactly once")

    def succ(self, v: int, u: int) -> int:
        rot = self.rotation[v]
        return rot[(rot.index(u) + 1) % len(rot)]

    def pred(self, v: int, u: int) -> int:
        rot = self.rotation[v]
        return rot[(rot.index(u) - 1) % len(rot)]

    def restrict(self, vertices: Iterable[int]) -> "Embedding":
        """Induced embedding on a vertex subset: rotations filtered, cyclic order kept."""
        keep = frozenset(vertices)
        h = induced_subgraph(self.graph, keep)
        return Embedding(h, {v: tuple(w for w in self.rotation[v] if w in keep) for v in h.vertices})

    def to_text(self) -> str:
        return "\n".join(f"{v}: " + " ".join(map(str, self.rotation[v])) for v in self.graph.vertices) + "\n"


def parse_embedding(text: str) -> Embedding:
    rotation: dict[int, tuple[int, ...]] = {}
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise InputError(f"line {lineno}: expected 'v: n1 n2 ...'")
        head, tail = line.split(":", 1)
        try:
            v = int(head)
            nbrs = tuple(int(t) for t in tail.split())
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
        rotation[v] = nbrs
        edges.update((v, w) for w in nbrs)
    for v, w in edges:
        if (w, v) not in edges:
            raise InputError(f"edge {v}-{w} listed at one end only")
    g = Graph(rotation.keys(), [(v, w) for v, w in edges if v < w])
    return Embedding(g, rotation)


def faces(e: Embedding) -> list[Face]:
    """All faces, each walk starting at its smallest dart, sorted by (vertex set, walk)."""
    g = e.graph
    out: list[Face] = []
    if not g.edges:
        return [Face(())] if len(g) else []
    seen: set[Dart] = set()
    for u in g.vertices:
        for v in e.rotation[u]:
            if (u, v) in seen:
                continue
            walk = []
            dart = (u, v)
            while dart not in seen:
                seen.add(dart)
                walk.append(dart)
                a, b = dart
                dart = (b, e.succ(b, a))
            i = walk.index(min(walk))
            out.append(Face(tuple(walk[i:] + walk[:i])))
    out.sort(key=Face.key)
    return out


def euler_ok(e: Embedding) -> bool:
    """V - E + F = 1 + (number of components): the rotation system is a sphere embedding."""
    g = e.graph
    if not len(g):
        return True
    comps = components(g)
    nfaces = sum(len(faces(e.restrict(c))) for c in comps) if len(comps) > 1 else len(faces(e))
    return len(g) - len(g.edges) + nfaces == 2 * len(comps)


def embed_planar(g: Graph, cap: int = DEFAULT_EMBED_CAP) -> Embedding | None:
    if len(g) > cap:
        raise CapExceeded(f"embedding capped at {cap} vertices, got {len(g)}")
    planar, pe = nx.check_planarity(g.to_networkx())
    if not planar:
        return None
    rotation = {v: tuple(pe.neighbors_cw_order(v)) for v in g.vertices}
    emb = Embedding(g, rotation)
    if not euler_ok(emb):
        raise AssertionError("embedding fails Euler's formula")
    return emb


def is_planar(g: Graph) -> bool:
    return nx.check_planarity(g.to_networkx())[0]


# --- thickening ------------------------------------------------------------


@dataclass(frozen=True)
class Thickening:
    graph: Graph
    embedding: Embedding
    vertex_map: Mapping[int, frozenset[int]]
    source: Graph
    arc: Mapping[int, tuple[int, int, int]] = field(repr=False)


def thicken(g: Graph, e: Embedding | None = None) -> Thickening:
    """Replace each vertex of degree k by a cycle through 2k arc endpoints and each
    edge by two parallel connectors; the result is 2-connected and planar.

    Arc endpoints of vertex v for edge vw are (v, w, 0) and (v, w, 1), laid out
    around v in rotation order.
    """
    if len(g) == 0 or not is_connected(g):
        raise InputError("thickening needs a connected graph")
    if not g.edges:
        raise InputError("thickening needs at least one edge")
    if e is None:
        e = embed_planar(g)
        if e is None:
            raise InputError("graph is not planar")
    points: list[tuple[int, int, int]] = []
    edges: list[tuple[tuple, tuple]] = []
    for v in g.vertices:
        rot = e.rotation[v]
        ring = [(v, w, s) for w in rot for s in (0, 1)]
        points.extend(ring)
        if len(rot) == 1:
            edges.append((ring[0], ring[1]))
        else:
            edges.extend((ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring)))
    for v, w in g.edges:
        edges.append(((v, w, 0), (w, v, 1)))
        edges.append(((v, w, 1), (w, v, 0)))
    index = {p: i + 1 for i, p in enumerate(sorted(points))}
    gp = Graph(index.values(), [(index[a], index[b]) for a, b in edges])
    emb = embed_planar(gp)
    if emb is None or not is_2_connected(gp):
        raise AssertionError("thickening is not a 2-connected planar graph")
    vmap = {v: frozenset(index[p] for p in points if p[0] == v) for v in g.vertices}
    arc = {i: p for p, i in index.items()}
    return Thickening(gp, emb, vmap, g, arc)


def lift_cover(c: Cover, th: Thickening) -> Cover:
    """Replace every member vertex by its circle in the thickened graph."""
    if c.ambient != th.source:
        raise InputError("cover does not live on the thickened graph's source")
    if not validate_cover(c).valid:
        raise InputError("lift needs a connected cover")
    lifted = Cover(th.graph, [frozenset().union(*(th.vertex_map[v] for v in m)) for m in c.members])
    for i in range(len(lifted)):
        if not is_2_connected(lifted.member_graph(i)):
            raise AssertionError(f"lifted member {i} is not 2-connected")
    return lifted


# --- face filling ------------------------------------------------------------


def corner_face(e: Embedding, hrot: Embedding, w: int, c: int) -> Dart:
    """Dart of H entering w whose face contains the corner where G-edge w-c leaves w.

    Walk backwards around w in G's rotation from c to the first H-neighbour a;
    the corner between a and its H-successor then lies in the face of (a, w).
    """
    u = c
    while True:
        u = e.pred(w, u)
        if u in hrot.rotation and u in hrot.graph.adj[w]:
            return (u, w)
        if u == c:
            raise InputError(f"vertex {w} has no neighbours in H")


def interior_vertices(e: Embedding, h_vertices: Iterable[int], f: Face) -> frozenset[int]:
    """Vertices of G strictly inside face f of the induced embedding on h_vertices."""
    g = e.graph
    w_set = frozenset(h_vertices)
    hemb = e.restrict(w_set)
    hfaces = faces(hemb)
    dart_face = {d: i for i, hf in enumerate(hfaces) for d in hf.walk}
    if f not in hfaces:
        raise InputError("f is not a face of the induced embedding")
    target = hfaces.index(f)
    inside: set[int] = set()
    for comp in components(g, g.vertex_set - w_set):
        found = set()
        for c in comp:
            for w in g.adj[c]:
                if w in w_set:
                    found.add(dart_face[corner_face(e, hemb, w, c)])
        if len(found) != 1:
            raise AssertionError("a component of G - H touches several faces of H")
        if found == {target}:
            inside |= comp
    return frozenset(inside)


def fill_face(g: Graph, e: Embedding, h_vertices: Iterable[int], f: Face) -> frozenset[int]:
    w_set = frozenset(h_vertices)
    if e.graph != g:
        raise InputError("embedding is not of g")
    if not w_set <= g.vertex_set:
        raise InputError("h_vertices not in g")
    if not is_2_connected(induced_subgraph(g, w_set)):
        raise InputError("H must be 2-connected")
    out = w_set | interior_vertices(e, w_set, f)
    if not is_2_connected(induced_subgraph(g, out)):
        raise AssertionError("filled subgraph is not 2-connected")
    return out


def fillable_faces(e: Embedding, h_vertices: Iterable[int]) -> list[tuple[Face, frozenset[int]]]:
    """Faces of the induced embedding that are not faces of G, with their interiors."""
    w_set = frozenset(h_vertices)
    out = []
    for f in faces(e.restrict(w_set)):
        u = interior_vertices(e, w_set, f)
        if u:
            out.append((f, u))
    return out


# --- crossing check ------------------------------------------------------------


def _meet(members, idx) -> frozenset[int]:
    out = None
    for i in idx:
        out = members[i] if out is None else out & members[i]
    return out if out is not None else frozenset()


def crossing_fact_check(members, x: int, cycle: tuple[int, ...], tau: sc.Chain) -> bool | None:
    """For a 2-cycle tau avoiding x whose triangles all meet the face cycle S:
    order triangles by their first vertex on S (ties lexicographic) and check
    that G_sigma meets G_x for every 3-simplex sigma of T(tau, order).

    Returns None when some triangle misses S (the construction does not apply).
    """
    pos = {v: i for i, v in enumerate(cycle)}
    keyed = []
    for t in tau.simplices:
        if t >> x & 1:
            return None
        hits = [pos[v] for v in _meet(members, sc.labels(t)) if v in pos]
        if not hits:
            return None
        keyed.append((min(hits), sc.labels(t), t))
    order = [t for _, _, t in sorted(keyed)]
    tchain = sc.tchain(tau, order)
    return all(_meet(members, sc.labels(s) + (x,)) for s in tchain.simplices)


# --- pipeline --------------------------------------------------------------


@dataclass
class PipelineStep:
    filled: tuple[int, ...]
    added: int
    betti: list[int]
    valid: bool
    crossing_checks: int


@dataclass
class PipelineTrace:
    members: int
    thickened_vertices: int
    steps: list[PipelineStep]
    final_cone: bool
    b3_zero: bool

    @property
    def ok(self) -> bool:
        return self.final_cone and self.b3_zero and all(s.valid for s in self.steps)

    def to_json(self) -> dict:
        return {
            "members": self.members,
            "thickened_vertices": self.thickened_vertices,
            "betti_trace": [s.betti for s in self.steps],
            "steps": len(self.steps),
            "crossing_checks": sum(s.crossing_checks for s in self.steps),
            "final_cone": self.final_cone,
            "b3_zero": self.b3_zero,
        }


def _family_valid(g: Graph, members) -> bool:
    # duplicates are allowed while filling, so validate the family directly
    distinct = list(dict.fromkeys(members))
    return validate_cover(Cover(g, distinct)).valid


def _b3(k: sc.SimplicialComplex) -> int:
    return sc.betti_at(k, 3)


def face_fill_pipeline(c: Cover, x: int = 0) -> PipelineTrace:
    """Thicken, lift, then fill faces of member x until it is the whole graph.

    Each step records the nerve's Betti numbers, checks the family is still a
    connected cover, and checks the crossing fact for every tetrahedron of
    4-subset avoiding x whose triangles all reach the face being filled.
    """
    g = c.ambient
    if not validate_cover(c).valid:
        raise InputError("pipeline needs a connected cover")
    if not is_connected(g):
        raise InputError("pipeline needs a connected graph")
    emb = embed_planar(g)
    if emb is None:
        raise InputError("pipeline needs a planar graph")
    if not 0 <= x < len(c):
        raise InputError(f"no member {x}")

    steps: list[PipelineStep] = []
    if not g.edges:
        k = c.nerve()
        steps.append(PipelineStep((), 0, sc.betti(k), True, 0))
        return PipelineTrace(len(c), len(g), steps, k.is_cone(), _b3(k) == 0)

    th = thicken(g, emb)
    lifted = lift_cover(c, th)
    if lifted.nerve() != c.nerve():
        raise AssertionError("lifting changed the nerve")
    gp, ep = th.graph, th.embedding
    members = list(lifted.members)
    k = sc.nerve(members)
    steps.append(PipelineStep((), 0, sc.betti(k), True, 0))
    b3_zero = _b3(k) == 0
    while members[x] != gp.vertex_set:
        options = fillable_faces(ep, members[x])
        if not options:
            raise AssertionError("member is not the whole graph but has no fillable face")
        f, inner = options[0]
        checks = 0
        others = [i for i in range(len(members)) if i != x]
        for quad in itertools.combinations(others, 4):
            beta = sc.to_mask(quad)
            tau = sc.boundary(sc.Chain(3, frozenset([beta])))
            res = crossing_fact_check(members, x, f.cycle, tau)
            if res is None:
                continue
            if not res:
                raise AssertionError(f"crossing fact fails for {sc.labels(beta)}")
            checks += 1
        members[x] = members[x] | inner
        k = sc.nerve(members)
        bet = sc.betti(k)
        b3_zero = b3_zero and _b3(k) == 0
        steps.append(PipelineStep(f.cycle, len(inner), bet, _family_valid(gp, members), checks))
    return PipelineTrace(len(c), len(gp), steps, k.is_cone(), b3_zero)
