"""Graph layout algorithms: concentric circles, Tutte, spectral, FR, SMACOF stress, Pivot MDS.

All layouts are deterministic given the graph, the options and the seed.
Iterative layouts that stop at their iteration cap with a residual above
tolerance emit :class:`ConvergenceFailure` and mark ``info["converged"]``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    ConvergenceFailure,
    DisconnectedGraph,
    NoRotationalGenerator,
    OrbitSizeMismatch,
    SingularSystem,
    ValidationError,
)
from .graph import AXIAL2, AutomorphismGroup, Drawing, Graph, cycles

ALGORITHMS = ("concentric", "tutte", "spectral", "fr", "stress", "pivotmds")


@dataclass
class LayoutConfig:
    algorithm: str
    seed: int = 0
    iterations: int | None = None
    tolerance: float | None = None
    outer_face: list | None = None
    pivot_count: int = 50
    orbit_radius_step: float = 1.0
    phase_offsets: list | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown layout algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.iterations is not None and self.iterations < 1:
            raise ValidationError("iterations must be at least 1")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValidationError("tolerance must be positive")
        if self.pivot_count < 1:
            raise ValidationError("pivot_count must be at least 1")


def run_layout(g: Graph, cfg: LayoutConfig, group: AutomorphismGroup | None = None) -> Drawing:
    a = cfg.algorithm
    if a == "concentric":
        if group is None:
            raise ValidationError("concentric layout needs an automorphism group")
        return concentric_circles(g, group, cfg.orbit_radius_step, cfg.phase_offsets)
    if a == "tutte":
        if cfg.outer_face is None:
            raise ValidationError("tutte layout needs an outer face")
        return tutte(g, cfg.outer_face, tolerance=cfg.tolerance or 1e-9)
    if a == "spectral":
        return spectral(g)
    opts = {"seed": cfg.seed}
    if cfg.iterations is not None:
        opts["iterations"] = cfg.iterations
    if a == "fr":
        return fr(g, **opts)
    if cfg.tolerance is not None:
        opts["tolerance"] = cfg.tolerance
    if a == "stress":
        return stress_majorization(g, **opts)
    return pivot_mds(g, pivot_count=cfg.pivot_count, **opts)


# ---------------------------------------------------------------------------
# concentric circles
# ---------------------------------------------------------------------------


def _polar_xy(r, theta):
    return np.array([r * np.cos(theta), r * np.sin(theta)])


def _axial_layout(g, refl, step):
    pos = np.zeros((g.n, 2))
    orbs = cycles(refl.mapping)
    pairs = [o for o in orbs if len(o) == 2]
    fixed = [o[0] for o in orbs if len(o) == 1]
    npairs = len(pairs)
    for i, (a, b) in enumerate(pairs):
        theta = np.pi / 2 - (i + 1) * np.pi / (npairs + 2)
        p = _polar_xy(step * (i + 1), theta)
        pos[b] = p
        pos[a] = (-p[0], p[1])
    for j, v in enumerate(fixed):
        pos[v] = (0.0, -step * (j + 1))
    return pos


def concentric_circles(g: Graph, group: AutomorphismGroup, step: float = 1.0, phase_offsets=None) -> Drawing:
    """Place each orbit of the largest rotation on its own circle as a regular polygon.

    Orbits of the generating rotation ``r`` (order ``k``) go to radii
    ``step, 2*step, ...`` with a fixed vertex at the centre.  For a dihedral
    group one reflection ``s`` is aligned with the y-axis: an orbit that ``s``
    maps to itself gets the phase that makes the y-axis a mirror line, and two
    orbits swapped by ``s`` share a circle at mirrored half-step offsets.  For
    the two-element axial group the mirrored pairs sit left and right of the
    y-axis and fixed vertices on it.
    """
    if group.group_kind == AXIAL2:
        return Drawing(g, _axial_layout(g, group.reflections()[0], step), {"algorithm": "concentric"})
    r = group.rotation_generator()
    if r is None:
        raise NoRotationalGenerator(f"{group.group_kind} group has no rotational element")
    k = r.order
    orbs = cycles(r.mapping)
    fixed = [o for o in orbs if len(o) == 1]
    if len(fixed) > 1:
        raise OrbitSizeMismatch("a rotation can fix at most one vertex (its centre)")
    refl = group.reflections()
    s = refl[0] if refl else None
    alpha = np.pi / 2
    orbit_of = {}
    for i, o in enumerate(orbs):
        for v in o:
            orbit_of[v] = i

    pos = np.zeros((g.n, 2))
    offsets = list(phase_offsets) if phase_offsets is not None else [0.0] * len(orbs)
    if len(offsets) != len(orbs):
        raise ValidationError(f"need {len(orbs)} phase offsets, got {len(offsets)}")
    radius_idx = 0
    placed = set()
    for i, o in enumerate(orbs):
        if i in placed:
            continue
        placed.add(i)
        if len(o) == 1:
            continue
        size = len(o)
        radius = step * (radius_idx + 1)
        radius_idx += 1
        if s is None:
            theta0 = 0.0
        else:
            img = s(o[0])
            j = orbit_of[img]
            if j == i:
                a = o.index(img)
                theta0 = alpha - np.pi * a / size
            else:
                theta0 = alpha + np.pi / (2 * size)
                # the partner orbit: position of r^t s(v0) mirrors r^-t v0
                partner = orbs[j]
                b = partner.index(img)
                for t in range(size):
                    v = partner[(b + t) % size]
                    pos[v] = _polar_xy(radius, 2 * alpha - theta0 + 2 * np.pi * t / size + offsets[j])
                placed.add(j)
        for t, v in enumerate(o):
            pos[v] = _polar_xy(radius, theta0 + 2 * np.pi * t / size + offsets[i])
    return Drawing(g, pos, {"algorithm": "concentric"})


# ---------------------------------------------------------------------------
# Tutte barycentric embedding
# ---------------------------------------------------------------------------


def tutte(g: Graph, outer_face, tolerance: float = 1e-9) -> Drawing:
    """Fix ``outer_face`` on the unit circle and put every other vertex at its neighbours' barycentre."""
    if not g.is_connected():
        raise DisconnectedGraph("Tutte embedding needs a connected graph")
    face = [int(v) for v in outer_face]
    if len(face) < 3 or len(set(face)) != len(face):
        raise ValidationError("outer face must list at least 3 distinct vertices")
    for a, b in zip(face, face[1:] + face[:1]):
        if not g.has_edge(a, b):
            raise ValidationError(f"outer face is not a cycle: {a} and {b} are not adjacent")
    n = g.n
    pos = np.zeros((n, 2))
    f = len(face)
    for i, v in enumerate(face):
        pos[v] = _polar_xy(1.0, np.pi / 2 + 2 * np.pi * i / f)
    boundary = np.zeros(n, dtype=bool)
    boundary[face] = True
    inner = np.flatnonzero(~boundary)
    if len(inner):
        A = g.adjacency_matrix()
        L = np.diag(A.sum(axis=1)) - A
        Lii = L[np.ix_(inner, inner)]
        rhs = -L[np.ix_(inner, np.flatnonzero(boundary))] @ pos[boundary]
        try:
            x = np.linalg.solve(Lii, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem("barycentric system is singular") from exc
        resid = float(np.abs(Lii @ x - rhs).max())
        if not np.all(np.isfinite(x)) or resid > tolerance:
            raise SingularSystem(f"barycentric system is ill-conditioned (residual {resid:.3g})")
        pos[inner] = x
    return Drawing(g, pos, {"algorithm": "tutte", "converged": True})


# ---------------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------------


def spectral(g: Graph) -> Drawing:
    """Laplacian eigenvectors of the 2nd and 3rd smallest eigenvalues as x and y."""
    if g.n < 3:
        raise ValidationError("spectral layout needs at least 3 vertices")
    A = g.adjacency_matrix()
    L = np.diag(A.sum(axis=1)) - A
    _, vecs = np.linalg.eigh(L)
    xy = vecs[:, 1:3].copy()
    for c in range(2):
        col = xy[:, c]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            xy[:, c] = -col
    return Drawing(g, xy, {"algorithm": "spectral", "converged": True})


# ---------------------------------------------------------------------------
# Fruchterman-Reingold
# ---------------------------------------------------------------------------


def fr(g: Graph, seed: int = 0, iterations: int = 500) -> Drawing:
    """Force-directed layout in a unit-area frame with linear cooling."""
    n = g.n
    rng = np.random.default_rng(seed)
    pos = rng.uniform(-0.5, 0.5, size=(n, 2))
    k = np.sqrt(1.0 / n)
    t0 = 0.1
    edges = np.array(g.edges, dtype=int).reshape(-1, 2)
    for it in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.hypot(delta[..., 0], delta[..., 1])
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        rep = (k * k / dist**2)[..., None] * delta
        idx = np.arange(n)
        rep[idx, idx] = 0.0
        disp = rep.sum(axis=1)
        if len(edges):
            de = pos[edges[:, 0]] - pos[edges[:, 1]]
            dl = np.maximum(np.hypot(de[:, 0], de[:, 1]), 1e-9)
            att = (dl / k)[:, None] * de
            np.add.at(disp, edges[:, 0], -att)
            np.add.at(disp, edges[:, 1], att)
        temp = t0 * (1.0 - it / iterations)
        length = np.maximum(np.hypot(disp[:, 0], disp[:, 1]), 1e-12)
        pos = pos + disp / length[:, None] * np.minimum(length, temp)[:, None]
    return Drawing(g, pos, {"algorithm": "fr", "seed": seed, "converged": True})


# ---------------------------------------------------------------------------
# distance-based layouts
# ---------------------------------------------------------------------------


def graph_distances(g: Graph) -> np.ndarray:
    """All-pairs hop distances; raises on a disconnected graph."""
    A = csr_matrix(g.adjacency_matrix())
    D = shortest_path(A, method="D", unweighted=True)
    if not np.all(np.isfinite(D)):
        raise DisconnectedGraph("distance-based layouts need a connected graph")
    return D


def stress(X, D, W) -> float:
    diff = X[:, None, :] - X[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    return float(0.5 * (W * (dist - D) ** 2).sum())


def stress_majorization(g: Graph, seed: int = 0, iterations: int = 1000, tolerance: float = 1e-7) -> Drawing:
    """SMACOF with weights ``d^-2`` from a seeded random start.

    Stops when the relative stress decrease drops below ``tolerance``.  The
    full stress history is kept in ``info["stress_history"]``.
    """
    n = g.n
    D = graph_distances(g)
    W = np.zeros_like(D)
    off = D > 0
    W[off] = D[off] ** -2.0
    V = -W.copy()
    np.fill_diagonal(V, W.sum(axis=1))
    J = np.full((n, n), 1.0 / n)
    Vpinv = np.linalg.inv(V + J) - J
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n, 2)) * (D.max() / 2)
    X -= X.mean(axis=0)
    history = [stress(X, D, W)]
    converged = False
    for _ in range(iterations):
        diff = X[:, None, :] - X[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        ratio = np.zeros_like(D)
        nz = dist > 1e-12
        ratio[nz] = W[nz] * D[nz] / dist[nz]
        B = -ratio
        np.fill_diagonal(B, 0.0)
        np.fill_diagonal(B, -B.sum(axis=1))
        X = Vpinv @ (B @ X)
        history.append(stress(X, D, W))
        prev, cur = history[-2], history[-1]
        if prev == 0.0 or (prev - cur) / prev < tolerance:
            converged = True
            break
    if not converged:
        warnings.warn(f"stress majorization stopped after {iterations} iterations", ConvergenceFailure)
    info = {"algorithm": "stress", "seed": seed, "converged": converged, "stress_history": history}
    return Drawing(g, X, info)


def _top2_eigvecs(M, max_iter, tol, rng):
    """Orthogonal (block power) iteration for the two dominant eigenvectors of symmetric ``M``."""
    Q, _ = np.linalg.qr(rng.standard_normal((M.shape[0], 2)))
    for it in range(max_iter):
        Z = M @ Q
        Qn, R = np.linalg.qr(Z)
        # subspace change, insensitive to sign and rotation within the span
        change = np.linalg.norm(Qn - Q @ (Q.T @ Qn))
        Q = Qn
        if change < tol:
            break
    else:
        return Q, False, max_iter
    # Rayleigh-Ritz inside the converged span to order the two directions
    small = Q.T @ M @ Q
    w, U = np.linalg.eigh(small)
    return Q @ U[:, ::-1], True, it + 1


def pivot_mds(g: Graph, pivot_count: int = 50, seed: int = 0, iterations: int | None = None,
              tolerance: float = 1e-10) -> Drawing:
    """Pivot MDS: double-centred squared distances to seeded pivots, top-2 singular directions."""
    n = g.n
    D = graph_distances(g)
    rng = np.random.default_rng(seed)
    kp = min(pivot_count, n)
    pivots = np.sort(rng.choice(n, size=kp, replace=False))
    C = D[:, pivots] ** 2
    C = -0.5 * (C - C.mean(axis=0, keepdims=True) - C.mean(axis=1, keepdims=True) + C.mean())
    max_iter = iterations if iterations is not None else max(10 * n, 1000)
    V, converged, used = _top2_eigvecs(C.T @ C, max_iter, tolerance, rng)
    X = C @ V
    for c in range(2):
        i = int(np.argmax(np.abs(X[:, c])))
        if X[i, c] < 0:
            X[:, c] = -X[:, c]
    if not converged:
        warnings.warn(f"pivot MDS power iteration stopped after {max_iter} iterations", ConvergenceFailure)
    info = {"algorithm": "pivotmds", "seed": seed, "converged": converged, "iterations": used,
            "pivots": pivots.tolist()}
    return Drawing(g, X, info)
