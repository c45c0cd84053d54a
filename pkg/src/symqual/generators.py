"""Synthetic symmetric graphs and a brute-force automorphism search."""

from __future__ import annotations

import numpy as np

from .errors import TooLarge, ValidationError
from .graph import AXIAL, ROTATIONAL, AutomorphismGroup, Graph, validate_automorphism

BRUTE_FORCE_MAX_N = 32


def gen_rotational(k: int, m: int, seed=0) -> tuple:
    """``m`` concentric ``k``-cycles joined ring to ring, with an order-``k`` rotation.

    Vertex ``i*k + j`` is position ``j`` on ring ``i``.  Consecutive rings are
    always joined by the ``k`` radial edges; a seeded coin adds the ``k``
    diagonal edges ``(i, j) - (i-1, j+1)`` as well.
    """
    if k < 2 or m < 1 or k * m < 3:
        raise ValidationError("need k >= 2, m >= 1 and at least 3 vertices")
    rng = np.random.default_rng(seed)
    edges = []

    def vid(i, j):
        return i * k + (j % k)

    for i in range(m):
        if k == 2:
            edges.append((vid(i, 0), vid(i, 1)))
        else:
            edges += [(vid(i, j), vid(i, j + 1)) for j in range(k)]
        if i > 0:
            edges += [(vid(i, j), vid(i - 1, j)) for j in range(k)]
            if rng.random() < 0.5:
                edges += [(vid(i, j), vid(i - 1, j + 1)) for j in range(k)]
    g = Graph(k * m, edges, name=f"c{k}x{m}")
    rot = validate_automorphism(g, [vid(v // k, v % k + 1) for v in range(k * m)], kind=ROTATIONAL)
    return g, AutomorphismGroup.generate(g, [rot])


def gen_axial(orbit_count: int, fixed_count: int = 0, edge_density: float = 0.3, seed=0,
              connected: bool = True) -> tuple:
    """Random graph with a mirror involution swapping ``orbit_count`` vertex pairs.

    Pair ``i`` is vertices ``2i, 2i+1``; fixed vertices follow.  Each mirror
    class of candidate edges (never inside a pair) is drawn with probability
    ``edge_density``.  With ``connected`` the components are then joined by
    extra mirrored edges.
    """
    if orbit_count < 1:
        raise ValidationError("need at least one mirrored pair")
    if fixed_count < 0 or not 0.0 <= edge_density <= 1.0:
        raise ValidationError("fixed_count must be >= 0 and edge_density in [0, 1]")
    n = 2 * orbit_count + fixed_count
    mu = [v ^ 1 if v < 2 * orbit_count else v for v in range(n)]
    rng = np.random.default_rng(seed)
    edges = set()

    def add(u, v):
        for a, b in ((u, v), (mu[u], mu[v])):
            edges.add((min(a, b), max(a, b)))

    done = set()
    for u in range(n):
        for v in range(u + 1, n):
            if mu[u] == v:
                continue
            key = (u, v)
            img = tuple(sorted((mu[u], mu[v])))
            rep = min(key, img)
            if rep in done:
                continue
            done.add(rep)
            if rng.random() < edge_density:
                add(u, v)
    if connected:
        edges = _connect_mirrored(n, edges, mu, add)
    g = Graph(n, sorted(edges), name=f"axial{orbit_count}p{fixed_count}f")
    refl = validate_automorphism(g, mu, kind=AXIAL)
    return g, AutomorphismGroup.generate(g, [refl])


def _connect_mirrored(n, edges, mu, add):
    while True:
        comp = _components(n, edges)
        if comp.max() == 0:
            return edges
        # join the component of vertex 0 to the lowest vertex outside it
        u = 0
        v = int(np.flatnonzero(comp != comp[0])[0])
        if mu[u] == v:
            u = int(np.flatnonzero(comp == comp[0])[-1])
        add(u, v)


def _components(n, edges):
    label = -np.ones(n, dtype=int)
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    c = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        stack = [s]
        label[s] = c
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if label[y] < 0:
                    label[y] = c
                    stack.append(y)
        c += 1
    return label


def brute_force_automorphisms(g: Graph, max_n: int = BRUTE_FORCE_MAX_N) -> list:
    """Every adjacency-preserving permutation (identity included), by backtracking.

    Vertices are matched in BFS order so that each new vertex, when it has an
    already-mapped neighbour, may only go to a neighbour of that image.
    Candidates must agree on degree and neighbour-degree multiset.
    """
    n = g.n
    if n > max_n:
        raise TooLarge(f"brute-force search is limited to {max_n} vertices, got {n}")
    deg = [g.degree(v) for v in range(n)]
    inv = [(deg[v], tuple(sorted(deg[w] for w in g.neighbors(v)))) for v in range(n)]
    order = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in g.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    pos = {v: i for i, v in enumerate(order)}
    # earlier-placed neighbours of each vertex in the search order
    back = [[w for w in g.neighbors(v) if pos[w] < pos[v]] for v in order]
    earlier = [order[:i] for i in range(n)]

    mapping = [-1] * n
    used = [False] * n
    out = []

    def extend(i):
        if i == n:
            out.append(tuple(mapping))
            return
        v = order[i]
        if back[i]:
            cands = g.neighbors(mapping[back[i][0]])
        else:
            cands = range(n)
        for c in cands:
            if used[c] or inv[c] != inv[v]:
                continue
            ok = True
            for w in earlier[i]:
                if g.has_edge(v, w) != g.has_edge(c, mapping[w]):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = c
            used[c] = True
            extend(i + 1)
            used[c] = False
            mapping[v] = -1

    extend(0)
    return sorted(out)
