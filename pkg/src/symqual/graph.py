"""Graph, drawing and automorphism data model.

Vertices are dense integer indices ``0..n-1`` so that permutations are plain
integer tuples.  Every object validates itself on construction and is
immutable afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AdjacencyViolated,
    GraphMismatch,
    GroupNotClosed,
    KindMismatch,
    KindUndetermined,
    NonFinite,
    NotBijective,
    ValidationError,
)

ROTATIONAL = "rotational"
AXIAL = "axial"

AXIAL2 = "axial2"
CYCLIC = "cyclic"
DIHEDRAL = "dihedral"

# closure is checked exhaustively up to this many listed elements
CLOSURE_CHECK_LIMIT = 64


class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "name", "_adj", "_edge_set")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), name: str = ""):
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ValidationError(f"vertex count must be a positive integer, got {n!r}")
        n = int(n)
        canon = []
        seen = set()
        for e in edges:
            if len(e) != 2:
                raise ValidationError(f"edge {e!r} does not have two endpoints")
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        adj = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_edge_set", frozenset(canon))

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def edge_set(self) -> frozenset:
        return self._edge_set

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            for w in self._adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        if self.edges:
            e = np.array(self.edges)
            a[e[:, 0], e[:, 1]] = 1.0
            a[e[:, 1], e[:, 0]] = 1.0
        return a

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edge_set == other._edge_set and self.name == other.name

    def __hash__(self):
        return hash((self.n, self._edge_set, self.name))

    def __repr__(self):
        return f"Graph(name={self.name!r}, n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class Drawing:
    """Per-vertex 2D positions for a graph.

    ``info`` carries layout diagnostics (convergence flag, stress history) and
    takes no part in equality.
    """

    graph: Graph
    positions: np.ndarray
    info: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValidationError(f"positions must have shape (n, 2), got {pos.shape}")
        if pos.shape[0] != self.graph.n:
            raise GraphMismatch(
                f"drawing has {pos.shape[0]} positions but graph {self.graph.name!r} "
                f"has {self.graph.n} vertices"
            )
        if not np.all(np.isfinite(pos)):
            raise NonFinite("drawing contains non-finite coordinates")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def converged(self) -> bool:
        return bool(self.info.get("converged", True))

    def with_positions(self, positions) -> "Drawing":
        return Drawing(self.graph, positions)

    def __eq__(self, other):
        if not isinstance(other, Drawing):
            return NotImplemented
        return self.graph == other.graph and np.array_equal(self.positions, other.positions)

    __hash__ = None


def cycles(mapping: Sequence[int]) -> tuple:
    """Cycle decomposition, each cycle starting at its smallest vertex.

    Cycles follow the permutation (``v, p[v], p[p[v]], ...``) and are listed
    in order of their smallest vertex; fixed points give singleton cycles.
    """
    n = len(mapping)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        v = start
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = mapping[v]
        out.append(tuple(cyc))
    return tuple(out)


def permutation_order(mapping: Sequence[int]) -> int:
    return reduce(math.lcm, (len(c) for c in cycles(mapping)), 1)


def _check_bijection(mapping, n):
    if len(mapping) != n:
        raise NotBijective(f"mapping has length {len(mapping)}, expected {n}")
    hit = [False] * n
    for v, img in enumerate(mapping):
        if not 0 <= img < n:
            raise NotBijective(f"vertex {v} maps to {img}, outside [0, {n})")
        if hit[img]:
            raise NotBijective(f"vertex {img} is the image of more than one vertex")
        hit[img] = True


@dataclass(frozen=True)
class Automorphism:
    """Validated adjacency-preserving permutation with its geometric kind.

    ``kind`` is ``"rotational"`` or ``"axial"``; ``order`` is the permutation
    order (the rotation order ``k`` for rotational elements, 2 for axial).
    Build instances through :func:`validate_automorphism`.
    """

    graph: Graph = field(repr=False, compare=False)
    mapping: tuple
    kind: str
    order: int
    orbits: tuple = field(repr=False)

    @property
    def k(self) -> int:
        return self.order

    @property
    def is_rotational(self) -> bool:
        return self.kind == ROTATIONAL

    @property
    def is_axial(self) -> bool:
        return self.kind == AXIAL

    @property
    def largest_orbit(self) -> int:
        return max(len(o) for o in self.orbits)

    @property
    def weight(self) -> int:
        """Group-score weight: the rotation order, or 2 for a reflection."""
        return self.order if self.is_rotational else 2

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def inverse(self) -> "Automorphism":
        inv = [0] * len(self.mapping)
        for v, img in enumerate(self.mapping):
            inv[img] = v
        return validate_automorphism(self.graph, inv, kind=self.kind)

    def power(self, e: int) -> tuple:
        """Raw mapping of ``self`` applied ``e`` times (may be the identity)."""
        e %= self.order
        out = list(range(len(self.mapping)))
        for _ in range(e):
            out = [self.mapping[v] for v in out]
        return tuple(out)


def validate_automorphism(g: Graph, mapping, kind: str | None = None, k: int | None = None) -> Automorphism:
    """Check that ``mapping`` is a non-trivial automorphism of ``g`` and classify it.

    Permutations of order 3 or more are rotational.  Involutions are
    ambiguous (a half-turn and a reflection induce the same kind of
    permutation), so ``kind`` may be passed as a hint; without one an
    involution is taken as axial.  A half-turn fixes at most its centre, so an
    involution with two or more fixed points cannot be rotational.
    """
    mapping = tuple(int(x) for x in mapping)
    _check_bijection(mapping, g.n)
    for u, v in g.edges:
        if not g.has_edge(mapping[u], mapping[v]):
            raise AdjacencyViolated(u, v)
    orbs = cycles(mapping)
    order = reduce(math.lcm, (len(c) for c in orbs), 1)
    if order == 1:
        raise KindUndetermined("identity permutation has no geometric kind")
    if kind not in (None, ROTATIONAL, AXIAL):
        raise KindMismatch(f"unknown automorphism kind {kind!r}")
    fixed = sum(1 for c in orbs if len(c) == 1)
    if order > 2:
        if kind == AXIAL:
            raise KindMismatch(f"permutation of order {order} cannot be axial")
        inferred = ROTATIONAL
    elif kind == ROTATIONAL:
        if fixed > 1:
            raise KindMismatch(f"half-turn cannot fix {fixed} vertices")
        inferred = ROTATIONAL
    else:
        inferred = AXIAL
    if k is not None and inferred == ROTATIONAL and int(k) != order:
        raise KindMismatch(f"declared rotation order {k} but permutation order is {order}")
    return Automorphism(g, mapping, inferred, order, orbs)


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """Validated composition ``phi o psi`` (apply ``psi`` first).

    The geometric kind follows the parity of reflections: two reflections
    compose to a rotation, a rotation and a reflection to a reflection.
    Raises :class:`KindUndetermined` when the product is the identity.
    """
    if phi.graph is not psi.graph and phi.graph != psi.graph:
        raise GraphMismatch("automorphisms belong to different graphs")
    mapping = tuple(phi.mapping[v] for v in psi.mapping)
    kind = AXIAL if (phi.is_axial != psi.is_axial) else ROTATIONAL
    return validate_automorphism(phi.graph, mapping, kind=kind)


def _compose_raw(a, b):
    return tuple(a[v] for v in b)


@dataclass(frozen=True)
class AutomorphismGroup:
    """Geometric automorphism group, stored without its identity.

    ``group_kind`` is ``"axial2"``, ``"cyclic"`` or ``"dihedral"`` and
    ``size`` counts the implied identity, so a cyclic group of rotation order
    ``k`` lists ``k - 1`` elements and a dihedral one ``2k - 1``.
    """

    graph: Graph = field(repr=False, compare=False)
    elements: tuple
    group_kind: str
    size: int

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        els = self.elements
        if len(els) + 1 != self.size:
            raise ValidationError(
                f"{self.group_kind} group of size {self.size} must list {self.size - 1} "
                f"non-identity elements, got {len(els)}"
            )
        for e in els:
            if e.graph is not self.graph and e.graph != self.graph:
                raise GraphMismatch("group element belongs to a different graph")
        n_rot = sum(1 for e in els if e.is_rotational)
        n_ax = len(els) - n_rot
        gk = self.group_kind
        if gk == AXIAL2:
            ok = self.size == 2 and n_ax == 1
        elif gk == CYCLIC:
            ok = n_ax == 0 and self.size >= 2 and max(e.order for e in els) == self.size
        elif gk == DIHEDRAL:
            k = self.size // 2
            ok = (
                self.size % 2 == 0
                and n_ax == k
                and n_rot == k - 1
                and (k == 1 or max(e.order for e in els if e.is_rotational) == k)
            )
        else:
            raise ValidationError(f"unknown group kind {gk!r}")
        if not ok:
            raise ValidationError(
                f"elements ({n_rot} rotational, {n_ax} axial) inconsistent with "
                f"{gk} group of size {self.size}"
            )
        maps = [e.mapping for e in els]
        if len(set(maps)) != len(maps):
            raise ValidationError("group lists a duplicate element")
        if len(els) <= CLOSURE_CHECK_LIMIT:
            self._check_closure()

    def _check_closure(self):
        n = self.graph.n
        ident = tuple(range(n))
        members = {e.mapping: e.kind for e in self.elements}
        members[ident] = ROTATIONAL
        for a in self.elements:
            for b in self.elements:
                c = _compose_raw(a.mapping, b.mapping)
                if c not in members:
                    raise GroupNotClosed(f"composition of two elements is not in the group")
                expect = AXIAL if a.is_axial != b.is_axial else ROTATIONAL
                if c != ident and members[c] != expect:
                    raise GroupNotClosed("composition has inconsistent geometric kind")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def rotation_order(self) -> int:
        """Largest rotation order in the group (1 for the axial group)."""
        rots = [e.order for e in self.elements if e.is_rotational]
        return max(rots) if rots else 1

    def rotation_generator(self) -> Automorphism | None:
        rots = [e for e in self.elements if e.is_rotational]
        if not rots:
            return None
        best = max(e.order for e in rots)
        return min((e for e in rots if e.order == best), key=lambda e: e.mapping)

    def reflections(self) -> list:
        return [e for e in self.elements if e.is_axial]

    @classmethod
    def generate(cls, graph: Graph, generators: Sequence[Automorphism]) -> "AutomorphismGroup":
        """Close a set of generators under composition.

        Element kinds follow reflection parity.  Elements are ordered with
        rotations first (by increasing power of the generating rotation when
        there is one), then reflections, so the output is deterministic.
        """
        gens = [g for g in generators]
        if not gens:
            raise ValidationError("need at least one generator")
        ident = tuple(range(graph.n))
        seen = {ident: False}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for gen in gens:
                    c = _compose_raw(gen.mapping, m)
                    if c not in seen:
                        seen[c] = seen[m] != gen.is_axial
                        nxt.append(c)
            frontier = nxt
        del seen[ident]
        rot_maps = [m for m, ax in seen.items() if not ax]
        ax_maps = sorted(m for m, ax in seen.items() if ax)
        rot_els = [validate_automorphism(graph, m, kind=ROTATIONAL) for m in rot_maps]
        if rot_els:
            gen_rot = max(rot_els, key=lambda e: (e.order, [-x for x in e.mapping]))
            powers = {}
            cur = gen_rot.mapping
            for p in range(1, gen_rot.order):
                powers[cur] = p
                cur = _compose_raw(gen_rot.mapping, cur)
            rot_els.sort(key=lambda e: (powers.get(e.mapping, gen_rot.order), e.mapping))
        ax_els = [validate_automorphism(graph, m, kind=AXIAL) for m in ax_maps]
        size = len(seen) + 1
        if ax_els and rot_els:
            kind = DIHEDRAL
        elif ax_els:
            kind = AXIAL2 if size == 2 else DIHEDRAL
        else:
            kind = CYCLIC
        return cls(graph, tuple(rot_els + ax_els), kind, size)

    def subgroup(self, generators: Sequence[Automorphism]) -> "AutomorphismGroup":
        return AutomorphismGroup.generate(self.graph, generators)
