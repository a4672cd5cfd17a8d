"""Abstract simplicial complexes and chains with Z2 coefficients.

Simplices are bitmasks over non-negative integer vertex labels (bit ``v`` set
means vertex ``v`` is present); the empty face is ``0``.  A complex stores its
full face set, so downward closure is explicit.  Chains are sets of
same-dimension simplices and add by symmetric difference.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, InputError, PreconditionError


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def to_mask(labels: Iterable[int]) -> int:
    mask = 0
    for v in labels:
        if not isinstance(v, (int, np.integer)) or v < 0:
            raise InputError(f"vertex label {v!r} must be a non-negative integer")
        mask |= 1 << int(v)
    return mask


def labels(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# --- GF(2) linear algebra ------------------------------------------------


class GF2Basis:
    """Incremental row-echelon basis of bit vectors; optionally tracks combinations."""

    def __init__(self, track: bool = False):
        self.pivots: dict[int, int] = {}
        self.combos: dict[int, int] = {}
        self.track = track

    def reduce(self, vec: int) -> tuple[int, int]:
        combo = 0
        while vec:
            top = vec.bit_length() - 1
            row = self.pivots.get(top)
            if row is None:
                break
            vec ^= row
            if self.track:
                combo ^= self.combos[top]
        return vec, combo

    def add(self, vec: int, tag: int = 0) -> bool:
        vec, combo = self.reduce(vec)
        if not vec:
            return False
        top = vec.bit_length() - 1
        self.pivots[top] = vec
        if self.track:
            self.combos[top] = combo ^ tag
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def gf2_rank(rows: Iterable[int]) -> int:
    basis = GF2Basis()
    for r in rows:
        basis.add(r)
    return basis.rank


def gf2_solve(columns: Sequence[int], target: int) -> int | None:
    """Find a subset of ``columns`` (returned as a bitmask of indices) XOR-summing to ``target``."""
    basis = GF2Basis(track=True)
    for i, col in enumerate(columns):
        basis.add(col, 1 << i)
    rest, combo = basis.reduce(target)
    return None if rest else combo


def dense_gf2_rank(matrix: np.ndarray) -> int:
    """Plain row reduction of a 0/1 matrix mod 2."""
    m = (np.asarray(matrix) % 2).astype(np.uint8)
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        hits = np.nonzero(m[:, c])[0]
        for r in hits:
            if r != rank:
                m[r] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


# --- chains --------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    """A Z2 d-chain: the set of d-simplices carrying coefficient 1."""

    dim: int
    simplices: frozenset[int]

    def __post_init__(self):
        if self.dim < -1:
            raise InputError("chain dimension must be >= -1")
        for s in self.simplices:
            if popcount(s) != self.dim + 1:
                raise InputError(f"simplex {labels(s)} does not have dimension {self.dim}")

    @classmethod
    def of(cls, dim: int, simplices: Iterable[Iterable[int]]) -> "Chain":
        out: set[int] = set()
        for s in simplices:
            out ^= {to_mask(s)}
        return cls(dim, frozenset(out))

    @classmethod
    def zero(cls, dim: int) -> "Chain":
        return cls(dim, frozenset())

    def __add__(self, other: "Chain") -> "Chain":
        if not self.simplices:
            return other
        if not other.simplices:
            return self
        if other.dim != self.dim:
            raise InputError("cannot add chains of different dimension")
        return Chain(self.dim, self.simplices ^ other.simplices)

    def __bool__(self) -> bool:
        return bool(self.simplices)

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.simplices, key=labels))

    def as_lists(self) -> list[list[int]]:
        return [list(labels(s)) for s in self]

    def vertex_mask(self) -> int:
        out = 0
        for s in self.simplices:
            out |= s
        return out

    def __repr__(self) -> str:
        return " + ".join("{" + ",".join(map(str, labels(s))) + "}" for s in self) or f"0_{self.dim}"


def boundary_of_simplex(s: int) -> list[int]:
    return [s & ~(1 << v) for v in labels(s)]


def boundary(c: Chain) -> Chain:
    if c.dim == -1:
        return Chain.zero(-1)
    out: set[int] = set()
    for s in c.simplices:
        for f in boundary_of_simplex(s):
            out ^= {f}
    return Chain(c.dim - 1, frozenset(out))


def cone_chain(x: int, a: Chain) -> Chain:
    """[x, a]: add apex ``x`` to every simplex; the zero chain maps to zero."""
    bit = 1 << x
    if any(s & bit for s in a.simplices):
        raise InputError(f"apex {x} already occurs in the chain")
    return Chain(a.dim + 1, frozenset(s | bit for s in a.simplices))


# --- complexes -----------------------------------------------------------


@dataclass(frozen=True)
class SimplicialComplex:
    faces: frozenset[int]

    def __post_init__(self):
        faces = set(self.faces)
        if faces:
            faces.add(0)
        for f in self.faces:
            for v in labels(f):
                if f & ~(1 << v) not in faces:
                    raise InputError(f"face {labels(f)} is missing its facet {labels(f & ~(1 << v))}")
        object.__setattr__(self, "faces", frozenset(faces))

    @classmethod
    def from_maximal(cls, maximal: Iterable[Iterable[int]]) -> "SimplicialComplex":
        faces: set[int] = set()
        for m in maximal:
            mask = to_mask(m)
            if mask in faces:
                continue
            faces.update(submasks(mask))
        return cls(frozenset(faces))

    @classmethod
    def from_faces(cls, faces: Iterable[int]) -> "SimplicialComplex":
        """Downward closure of an arbitrary family of face masks."""
        out: set[int] = set()
        for f in faces:
            if f not in out:
                out.update(submasks(f))
        return cls(frozenset(out))

    @classmethod
    def simplex(cls, vertices: Iterable[int]) -> "SimplicialComplex":
        return cls.from_maximal([list(vertices)])

    @classmethod
    def simplex_boundary(cls, vertices: Iterable[int]) -> "SimplicialComplex":
        vs = list(vertices)
        return cls.from_maximal(itertools.combinations(vs, len(vs) - 1))

    @property
    def is_empty(self) -> bool:
        """True for the void complex and for {empty face}."""
        return len(self.faces) <= 1

    @cached_property
    def vertex_mask(self) -> int:
        out = 0
        for f in self.faces:
            out |= f
        return out

    @property
    def vertices(self) -> tuple[int, ...]:
        return labels(self.vertex_mask)

    @cached_property
    def dim(self) -> int:
        return max((popcount(f) for f in self.faces), default=0) - 1

    @cached_property
    def _by_dim(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for f in self.faces:
            out.setdefault(popcount(f) - 1, []).append(f)
        for lst in out.values():
            lst.sort()
        return out

    def simplices(self, d: int) -> list[int]:
        return self._by_dim.get(d, [])

    def f(self, d: int) -> int:
        return len(self.simplices(d))

    def f_vector(self) -> list[int]:
        return [self.f(d) for d in range(self.dim + 1)]

    def __contains__(self, face: object) -> bool:
        if isinstance(face, int):
            return face in self.faces
        return to_mask(face) in self.faces  # type: ignore[arg-type]

    def maximal_faces(self) -> list[tuple[int, ...]]:
        faces = self.faces
        out = []
        for f in faces:
            if f == 0 and len(faces) > 1:
                continue
            if all(f | (1 << v) not in faces for v in labels(self.vertex_mask & ~f)):
                out.append(labels(f))
        return sorted(out)

    def induced(self, vertex_mask: int) -> "SimplicialComplex":
        return SimplicialComplex(frozenset(f for f in self.faces if f & ~vertex_mask == 0))

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self.faces | other.faces)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self.faces & other.faces)

    def is_cone(self) -> bool:
        """Some vertex lies in every maximal face (then the complex is contractible)."""
        if self.is_empty:
            return False
        return any(all(f | (1 << v) in self.faces for f in self.faces) for v in self.vertices)

    def relabel(self, mapping: dict[int, int]) -> "SimplicialComplex":
        return SimplicialComplex(frozenset(to_mask(mapping[v] for v in labels(f)) for f in self.faces))

    def __repr__(self) -> str:
        return f"SimplicialComplex({self.maximal_faces()})"


def nerve(sets: Sequence[Iterable[int]]) -> SimplicialComplex:
    """Nerve of a family: vertex i per member, a face per subfamily with a common element."""
    members = [frozenset(m) for m in sets]
    if any(not m for m in members):
        raise InputError("nerve members must be nonempty")
    n = len(members)
    faces = {0}
    stack = [(0, None, -1)]
    while stack:
        face, common, last = stack.pop()
        for j in range(last + 1, n):
            meet = members[j] if common is None else common & members[j]
            if meet:
                f = face | (1 << j)
                faces.add(f)
                stack.append((f, meet, j))
    return SimplicialComplex(frozenset(faces))


def boundary_rank(k: SimplicialComplex, d: int) -> int:
    """Rank over GF(2) of the boundary map C_d -> C_{d-1} (d = 0 maps onto the empty face)."""
    cells = k.simplices(d)
    if not cells:
        return 0
    if d == 0:
        return 1
    index = {f: i for i, f in enumerate(k.simplices(d - 1))}
    basis = GF2Basis()
    for s in cells:
        vec = 0
        for f in boundary_of_simplex(s):
            vec |= 1 << index[f]
        basis.add(vec)
        if basis.rank == len(index):
            break
    return basis.rank


def betti(k: SimplicialComplex) -> list[int]:
    """Reduced Z2 Betti numbers b_0 .. b_dim (empty list for the void / {empty} complex)."""
    if k.is_empty:
        return []
    ranks = [boundary_rank(k, d) for d in range(k.dim + 2)]
    return [k.f(d) - ranks[d] - ranks[d + 1] for d in range(k.dim + 1)]


def betti_at(k: SimplicialComplex, d: int) -> int:
    if k.is_empty or d > k.dim or d < 0:
        return 0
    return k.f(d) - boundary_rank(k, d) - boundary_rank(k, d + 1)


def boundary_matrix(k: SimplicialComplex, d: int) -> np.ndarray:
    """Dense 0/1 boundary matrix with rows = (d-1)-faces, cols = d-faces."""
    rows = k.simplices(d - 1)
    cols = k.simplices(d)
    index = {f: i for i, f in enumerate(rows)}
    m = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, s in enumerate(cols):
        if d == 0:
            m[index[0], j] = 1
            continue
        for f in boundary_of_simplex(s):
            m[index[f], j] = 1
    return m


# --- star, link, deletion, cones ----------------------------------------


def _check_vertex(k: SimplicialComplex, x: int) -> int:
    bit = 1 << x
    if bit not in k.faces:
        raise InputError(f"{x} is not a vertex of the complex")
    return bit


def star(k: SimplicialComplex, x: int) -> SimplicialComplex:
    bit = _check_vertex(k, x)
    return SimplicialComplex(frozenset(f for f in k.faces if f | bit in k.faces))


def link(k: SimplicialComplex, x: int) -> SimplicialComplex:
    bit = _check_vertex(k, x)
    return SimplicialComplex(frozenset(f for f in k.faces if not f & bit and f | bit in k.faces))


def delete(k: SimplicialComplex, x: int) -> SimplicialComplex:
    bit = _check_vertex(k, x)
    return SimplicialComplex(frozenset(f for f in k.faces if not f & bit))


def cone_extension(k: SimplicialComplex, x: int, l: SimplicialComplex) -> SimplicialComplex:
    """K together with the cone over L (a subcomplex of K - x) with apex x."""
    bit = 1 << x
    bad = [f for f in l.faces if f & bit or f not in k.faces]
    if bad:
        raise InputError(f"L is not a subcomplex of K - {x}: offending face {labels(bad[0])}")
    if l.is_empty and not l.faces:
        return k
    return SimplicialComplex(k.faces | frozenset(f | bit for f in l.faces))


def chain_in(c: Chain, k: SimplicialComplex) -> bool:
    return all(s in k.faces for s in c.simplices)


def bounds_in(c: Chain, k: SimplicialComplex) -> Chain | None:
    """A (d+1)-chain of ``k`` whose boundary is ``c``, or None if ``c`` is not a boundary."""
    cells = k.simplices(c.dim + 1)
    index = {f: i for i, f in enumerate(k.simplices(c.dim))}
    if not chain_in(c, k):
        return None
    target = 0
    for s in c.simplices:
        target |= 1 << index[s]
    cols = []
    for s in cells:
        vec = 0
        for f in boundary_of_simplex(s):
            vec |= 1 << index[f]
        cols.append(vec)
    combo = gf2_solve(cols, target)
    if combo is None:
        return None
    return Chain(c.dim + 1, frozenset(cells[i] for i in labels(combo)))


def critical_normal_form(
    k: SimplicialComplex, x: int, l: SimplicialComplex, gamma0: Chain
) -> tuple[Chain, Chain]:
    """Rewrite an (x, L)-critical cycle as gamma = boundary([x, beta]).

    ``gamma0`` must be a cycle of K that does not bound in K but bounds in the
    cone extension.  Returns ``(beta, gamma)`` with beta a chain of L whose
    coned simplices are new, [x, boundary(beta)] a chain of K, and gamma
    homologous to gamma0 in K.  The normal form is not unique; this returns
    the one induced by the first GF(2) solution.
    """
    if boundary(gamma0):
        raise InputError("gamma0 is not a cycle")
    if not chain_in(gamma0, k):
        raise InputError("gamma0 is not a chain of K")
    if bounds_in(gamma0, k) is not None:
        raise PreconditionError("gamma0 already bounds in K, so it is not critical")
    ext = cone_extension(k, x, l)
    beta0 = bounds_in(gamma0, ext)
    if beta0 is None:
        raise PreconditionError("gamma0 does not bound in the cone extension, so it is not critical")
    bit = 1 << x
    outside = frozenset(s for s in beta0.simplices if s not in k.faces)
    beta = Chain(gamma0.dim, frozenset(s & ~bit for s in outside))
    gamma = boundary(cone_chain(x, beta))
    return beta, gamma


# --- the ordered 2-cycle construction -----------------------------------


def _check_tchain_input(tau: Chain, order: Sequence[int]) -> list[int]:
    if tau.dim != 2:
        raise InputError("tchain needs a 2-chain")
    if boundary(tau):
        raise InputError("tau is not a 2-cycle")
    seq = [o if isinstance(o, int) else to_mask(o) for o in order]
    if len(seq) != len(tau.simplices) or set(seq) != set(tau.simplices):
        raise InputError("order must list every simplex of tau exactly once")
    return seq


def tchain_direct(tau: Chain, order: Sequence) -> Chain:
    """Sum of joins over all ordered quadruples t_i < t_j < t_k < t_l, straight from the definition."""
    seq = _check_tchain_input(tau, order)
    out: set[int] = set()
    for a, b, c, d in itertools.combinations(seq, 4):
        eta = (a & c) | (b & d)
        if popcount(eta) == 4:
            out ^= {eta}
    return Chain(3, frozenset(out))


def tchain(tau: Chain, order: Sequence) -> Chain:
    """Same chain as :func:`tchain_direct`, via crossing chords on a circle.

    Place the triangles on a circle in the given order and draw a chord
    between two triangles that share an edge, labelled by that edge.  Each
    crossing pair of chords with disjoint labels contributes the join of
    the labels.
    """
    seq = _check_tchain_input(tau, order)
    chords_a, chords_b, chord_lab = [], [], []
    for i, j in itertools.combinations(range(len(seq)), 2):
        shared = seq[i] & seq[j]
        if popcount(shared) == 2:
            chords_a.append(i)
            chords_b.append(j)
            chord_lab.append(shared)
    if len(chord_lab) < 2:
        return Chain.zero(3)
    a = np.array(chords_a)
    b = np.array(chords_b)
    lab = np.array(chord_lab, dtype=object)
    # chord p = (a_p, b_p) and q = (a_q, b_q) with a_p < a_q < b_p < b_q
    cross = (a[:, None] < a[None, :]) & (a[None, :] < b[:, None]) & (b[:, None] < b[None, :])
    ps, qs = np.nonzero(cross)
    out: set[int] = set()
    for p, q in zip(ps.tolist(), qs.tolist()):
        lp, lq = lab[p], lab[q]
        if not lp & lq:
            out ^= {lp | lq}
    return Chain(3, frozenset(out))


# --- Leray and face-count checks ----------------------------------------


def is_d_leray(k: SimplicialComplex, d: int, max_vertices: int = 15) -> bool:
    """Every induced subcomplex has vanishing reduced homology in all dimensions >= d."""
    verts = k.vertices
    if len(verts) > max_vertices:
        raise CapExceeded(f"{len(verts)} vertices exceeds the Leray cap of {max_vertices}")
    if k.dim < d:
        return True
    for r in range(d + 2, len(verts) + 1):
        for sub in itertools.combinations(verts, r):
            induced = k.induced(to_mask(sub))
            if induced.dim < d:
                continue
            if any(betti_at(induced, i) for i in range(d, induced.dim + 1)):
                return False
    return True


def kalai_facecount_check(k: SimplicialComplex, d: int, r: int) -> bool:
    """If f_d > C(n, d+1) - C(n-r, d+1) then f_{d+r} > 0 (n = number of vertices)."""
    n = k.f(0)
    threshold = comb(n, d + 1) - comb(max(n - r, 0), d + 1)
    return not (k.f(d) > threshold) or k.f(d + r) > 0


# --- text format ---------------------------------------------------------


def format_complex(k: SimplicialComplex) -> str:
    return "".join(" ".join(map(str, f)) + "\n" for f in k.maximal_faces())


def parse_complex(text: str) -> SimplicialComplex:
    """One face per line (space-separated labels, '#' comments); the downward closure is taken."""
    faces = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            faces.append([int(p) for p in line.split()])
        except ValueError as exc:
            raise InputError(f"line {lineno}: non-integer label") from exc
    return SimplicialComplex.from_maximal(faces)


def parse_chain(text: str) -> tuple[Chain, list[int]]:
    """A chain given one simplex per line; also returns the simplices in file order."""
    k = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            k.append(to_mask(int(p) for p in line.split()))
        except ValueError as exc:
            raise InputError(f"line {lineno}: non-integer label") from exc
    if not k:
        raise InputError("empty chain")
    dims = {popcount(m) - 1 for m in k}
    if len(dims) != 1:
        raise InputError("all simplices of a chain must have the same dimension")
    if len(set(k)) != len(k):
        raise InputError("repeated simplex in chain listing")
    return Chain(dims.pop(), frozenset(k)), k
