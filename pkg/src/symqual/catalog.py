"""Named symmetric graphs with frozen automorphism groups and Tutte outer faces.

Each group is generated from a rotation ``r`` and, for dihedral groups, a
reflection ``s`` written down explicitly below.  The test suite checks every
element against the brute-force automorphism search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .generators import gen_rotational
from .graph import AXIAL, ROTATIONAL, AutomorphismGroup, Graph, validate_automorphism


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    graph: Graph
    groups: dict  # label -> AutomorphismGroup, largest first
    tutte_outer_face: tuple
    provenance: str

    @property
    def name(self) -> str:
        return self.graph.name

    def group(self, label=None) -> AutomorphismGroup:
        if label is None:
            return next(iter(self.groups.values()))
        return self.groups[label]


def _dihedral_family(g, r_map, s_map, orders):
    """Groups generated by ``r^(k/d)`` and ``s`` for each requested rotation order ``d``."""
    r = validate_automorphism(g, r_map, kind=ROTATIONAL)
    s = validate_automorphism(g, s_map, kind=AXIAL)
    k = r.order
    out = {}
    for d in orders:
        rd = validate_automorphism(g, r.power(k // d), kind=ROTATIONAL)
        out[f"D{d}"] = AutomorphismGroup.generate(g, [rd, s])
    return out


def generalized_petersen(n, k, name):
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    edges += [(n + i, n + (i + k) % n) for i in range(n)]
    # GP(n, k) with n = 2k lists each inner edge once only when the step wraps; dedupe
    edges = sorted({(min(a, b), max(a, b)) for a, b in edges})
    g = Graph(2 * n, edges, name=name)
    r = [(i + 1) % n for i in range(n)] + [n + (i + 1) % n for i in range(n)]
    s = [(-i) % n for i in range(n)] + [n + (-i) % n for i in range(n)]
    return g, r, s


def petersen() -> CatalogEntry:
    g, r, s = generalized_petersen(5, 2, "petersen")
    return CatalogEntry(g, _dihedral_family(g, r, s, [5]), (0, 1, 2, 3, 4),
                        "generalized Petersen graph GP(5,2)")


def dodecahedral() -> CatalogEntry:
    g, r, s = generalized_petersen(10, 2, "dodecahedral")
    return CatalogEntry(g, _dihedral_family(g, r, s, [10, 5, 2]), (10, 12, 14, 16, 18),
                        "generalized Petersen graph GP(10,2)")


def _vertex_index(coords):
    return {tuple(int(x) for x in c): i for i, c in enumerate(coords)}


def cuboctahedral() -> CatalogEntry:
    coords = sorted(
        {p for base in [(1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0)]
         for p in itertools.permutations(base)}
    )
    coords = np.array(coords)
    idx = _vertex_index(coords)
    edges = [(i, j) for i in range(12) for j in range(i + 1, 12) if coords[i] @ coords[j] == 1]
    g = Graph(12, edges, name="cuboctahedral")
    # r: negated cyclic shift of coordinates (order 6); s: swap x and y
    r = [idx[tuple(-c[[2, 0, 1]])] for c in coords]
    s = [idx[tuple(c[[1, 0, 2]])] for c in coords]
    face = (idx[(1, 1, 0)], idx[(1, 0, 1)], idx[(0, 1, 1)])
    return CatalogEntry(g, _dihedral_family(g, r, s, [6, 3, 2]), face,
                        "skeleton of the cuboctahedron on permutations of (+-1, +-1, 0)")


def _signed_perm_involution(coords, idx, r):
    """First signed coordinate permutation ``s`` with ``s r s = r^-1``, as a vertex map."""
    n = len(coords)
    r_inv = [0] * n
    for v, w in enumerate(r):
        r_inv[w] = v
    for perm in itertools.permutations(range(4)):
        for signs in itertools.product((1, -1), repeat=4):
            s = [idx[tuple(c[list(perm)] * signs)] for c in coords]
            if s == list(range(n)) or any(s[s[v]] != v for v in range(n)):
                continue
            if all(s[r[s[v]]] == r_inv[v] for v in range(n)):
                return s
    raise RuntimeError("no reflecting involution found")


def tesseract() -> CatalogEntry:
    coords = np.array(list(itertools.product((-1, 1), repeat=4)))
    idx = _vertex_index(coords)
    edges = [(i, j) for i in range(16) for j in range(i + 1, 16) if np.abs(coords[i] - coords[j]).sum() == 2]
    g = Graph(16, edges, name="tesseract")
    # r: (v1, v2, v3, v4) -> (-v4, v1, v2, v3), order 8
    r = [idx[(-c[3], c[0], c[1], c[2])] for c in coords]
    s = _signed_perm_involution(coords, idx, r)
    face = tuple(idx[p] for p in [(-1, -1, -1, -1), (-1, -1, -1, 1), (-1, -1, 1, 1), (-1, -1, 1, -1)])
    return CatalogEntry(g, _dihedral_family(g, r, s, [8, 4, 2]), face, "4-dimensional hypercube Q4")


def coxeter() -> CatalogEntry:
    def a(i):
        return i % 7

    def b(i):
        return 7 + i % 7

    def c(i):
        return 14 + i % 7

    def d(i):
        return 21 + i % 7

    edges = []
    for i in range(7):
        edges += [(d(i), a(i)), (d(i), b(i)), (d(i), c(i))]
        edges += [(a(i), a(i + 1)), (b(i), b(i + 2)), (c(i), c(i + 3))]
    g = Graph(28, edges, name="coxeter")
    r = [7 * (v // 7) + (v % 7 + 1) % 7 for v in range(28)]
    rot = validate_automorphism(g, r, kind=ROTATIONAL)
    groups = {"C7": AutomorphismGroup.generate(g, [rot])}
    return CatalogEntry(g, groups, tuple(range(7)),
                        "Coxeter graph: three 7-cycles with steps 1, 2, 3 joined through 7 hub vertices")


def heawood() -> CatalogEntry:
    edges = [(i, (i + 1) % 14) for i in range(14)]
    edges += [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    g = Graph(14, edges, name="heawood")
    s = [(1 - i) % 14 for i in range(14)]
    refl = validate_automorphism(g, s, kind=AXIAL)
    groups = {"A2": AutomorphismGroup.generate(g, [refl])}
    return CatalogEntry(g, groups, (0, 1, 2, 3, 4, 5), "Heawood graph, LCF notation [5,-5]^7")


def c12x3() -> CatalogEntry:
    g, grp = gen_rotational(12, 3, seed=7)
    r = grp.rotation_generator()
    groups = {"C12": grp}
    for dd in (6, 4, 3, 2):
        rd = validate_automorphism(g, r.power(12 // dd), kind=ROTATIONAL)
        groups[f"C{dd}"] = AutomorphismGroup.generate(g, [rd])
    return CatalogEntry(g, groups, tuple(range(12)), "three 12-cycles joined ring to ring (seed 7)")


@lru_cache(maxsize=None)
def _catalog():
    return (petersen(), dodecahedral(), cuboctahedral(), tesseract(), coxeter(), heawood(), c12x3())


def catalog() -> list:
    return list(_catalog())


def entry(name: str) -> CatalogEntry:
    for e in _catalog():
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry named {name!r}")
