"""Exact and approximate symmetry detection on graph drawings.

Exact detection sorts the vertex points by angle and radius about the
centroid, finds rotations as periods of the cyclic (cluster, gap) sequence
and reflections as palindromic alignments, then checks that the induced
vertex permutation preserves adjacency.

Approximate detection measures, orbit by orbit, how far the drawing is from
displaying a given automorphism: points are folded into a common frame,
merged into one representative and unfolded into the closest exactly
symmetric configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegeneratePointSet, GraphMismatch, OrbitSizeMismatch
from .geometry import (
    TWO_PI,
    Line,
    PointSet,
    angular_signature,
    canonical_direction,
    correspondence_axis,
    normalize_to_unit_circle,
    principal_axis,
    rotate,
    rotation_center_index,
    top_eigenvector_2x2,
)
from .graph import Automorphism, Drawing, Graph, cycles

# signature values are compared with this absolute tolerance after normalization
EXACT_TOL = 1e-7
# a mapped point must land this close to an original point
MATCH_TOL = 1e-7


# ---------------------------------------------------------------------------
# exact detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DetectedSymmetry:
    """A symmetry of the drawing together with the permutation it induces.

    ``kind`` is ``"rotation"`` (with ``order`` and ``center``) or
    ``"reflection"`` (with ``axis``).  Geometry is in drawing coordinates.
    """

    kind: str
    permutation: tuple
    order: int = 2
    center: np.ndarray | None = None
    axis: Line | None = None
    induced_orbits: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "induced_orbits", cycles(self.permutation))


@dataclass(frozen=True, eq=False)
class ExactSymmetryResult:
    """Outcome of exact detection.

    ``rotation`` is the highest-order rotation whose induced permutation is an
    automorphism, ``reflections`` all such mirror lines.  ``point_rotation_order``
    and ``point_axes`` describe the bare point set before the adjacency check.
    """

    found: bool
    rotation: DetectedSymmetry | None
    reflections: tuple
    point_rotation_order: int
    point_axes: tuple

    @property
    def symmetry(self) -> DetectedSymmetry | None:
        if self.rotation is not None:
            return self.rotation
        return self.reflections[0] if self.reflections else None

    def __bool__(self):
        return self.found


def _failure(seq, eq):
    """Knuth-Morris-Pratt failure function under a custom equality."""
    fail = [0] * len(seq)
    k = 0
    for i in range(1, len(seq)):
        while k > 0 and not eq(seq[i], seq[k]):
            k = fail[k - 1]
        if eq(seq[i], seq[k]):
            k += 1
        fail[i] = k
    return fail


def _find_all(pattern, text, eq):
    fail = _failure(pattern, eq)
    hits = []
    k = 0
    for i, x in enumerate(text):
        while k > 0 and not eq(x, pattern[k]):
            k = fail[k - 1]
        if eq(x, pattern[k]):
            k += 1
        if k == len(pattern):
            hits.append(i - k + 1)
            k = fail[k - 1]
    return hits


def _clusters(angles, radii, tol):
    """Group angularly sorted points into rays of (almost) equal angle."""
    angles = np.array(angles, dtype=float)
    radii = np.array(radii, dtype=float)
    wrap = angles > TWO_PI - tol
    if np.any(wrap):
        angles[wrap] -= TWO_PI
        order = np.lexsort((radii, angles))
        angles, radii = angles[order], radii[order]
    breaks = np.flatnonzero(np.diff(angles) > tol) + 1
    starts = np.concatenate(([0], breaks))
    ends = np.concatenate((breaks, [len(angles)]))
    cl_angles = np.array([angles[s:e].mean() for s, e in zip(starts, ends)])
    cl_radii = [tuple(np.sort(radii[s:e])) for s, e in zip(starts, ends)]
    return cl_angles, cl_radii


def _point_symmetries(P, tol=EXACT_TOL):
    """Rotation order and mirror-axis angles of a normalized point set about the origin."""
    sig = angular_signature(PointSet(P), (0.0, 0.0))
    off = sig.radii > tol
    if not np.any(off):
        return 1, []
    cl_angles, cl_radii = _clusters(sig.angles[off], sig.radii[off], tol)
    m = len(cl_angles)
    gaps = np.diff(np.concatenate((cl_angles, [cl_angles[0] + TWO_PI])))

    def same_cluster(a, b):
        return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))

    def same_elem(a, b):
        return abs(a[1] - b[1]) <= tol and same_cluster(a[0], b[0])

    seq = list(zip(cl_radii, gaps))
    fail = _failure(seq, same_elem)
    period = m - fail[-1]
    order = m // period if m % period == 0 else 1

    # interleaved cluster/gap string; a mirror reverses it
    inter = []
    for c, g in seq:
        inter.append(("c", c))
        inter.append(("g", g))

    def same_token(a, b):
        if a[0] != b[0]:
            return False
        if a[0] == "g":
            return abs(a[1] - b[1]) <= tol
        return same_cluster(a[1], b[1])

    rev = inter[::-1]
    hits = _find_all(rev, inter + inter[:-1], same_token)
    axes = []
    for t in hits:
        if t % 2 == 0:
            continue
        i0 = (t - 1) // 2
        if i0 % 2 == 0:
            ang = cl_angles[i0 // 2]
        else:
            j = (i0 - 1) // 2
            ang = cl_angles[j] + 0.5 * gaps[j]
        axes.append(float(ang % np.pi))
    return order, sorted(set(axes))


def _match(P, Q, tol=MATCH_TOL):
    """Permutation ``perm`` with ``Q[v] ~= P[perm[v]]``, or None."""
    tree = cKDTree(P)
    dist, idx = tree.query(Q, k=1)
    if np.any(dist > tol):
        return None
    if len(set(idx.tolist())) != len(idx):
        return None
    return tuple(int(i) for i in idx)


def _preserves_adjacency(g: Graph, perm) -> bool:
    return all(g.has_edge(perm[u], perm[v]) for u, v in g.edges)


def _divisors_desc(k):
    return [d for d in range(k, 1, -1) if k % d == 0]


def detect_exact(g: Graph, d: Drawing, tol: float = EXACT_TOL) -> ExactSymmetryResult:
    """Decide whether the drawing displays a non-trivial automorphism exactly.

    The centre of rotation is always the centroid of all vertex points.
    """
    if d.graph is not g and d.graph != g:
        raise GraphMismatch("drawing belongs to a different graph")
    ps, scale, translation = normalize_to_unit_circle(PointSet(d.positions))
    P = ps.points
    order, axis_angles = _point_symmetries(P, tol)

    centroid = -translation
    point_order = 1
    rotation = None
    for k in _divisors_desc(order):
        perm = _match(P, rotate(P, TWO_PI / k))
        if perm is None:
            continue
        point_order = max(point_order, k)
        if _preserves_adjacency(g, perm):
            rotation = DetectedSymmetry("rotation", perm, order=k, center=centroid.copy())
            break

    point_axes = []
    reflections = []
    for ang in axis_angles:
        u = np.array([math.cos(ang), math.sin(ang)])
        line = Line(np.zeros(2), u)
        perm = _match(P, line.reflect(P))
        if perm is None:
            continue
        point_axes.append(ang)
        if _preserves_adjacency(g, perm):
            reflections.append(DetectedSymmetry("reflection", perm, axis=Line(centroid.copy(), u)))
    found = rotation is not None or bool(reflections)
    return ExactSymmetryResult(found, rotation, tuple(reflections), point_order, tuple(point_axes))


# ---------------------------------------------------------------------------
# folding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationFrame:
    """Rotation about ``center`` by ``2*pi*multiplier/k`` per automorphism step."""

    center: np.ndarray
    k: int
    multiplier: int = 1


@dataclass(frozen=True)
class AxisFrame:
    axis: Line


@dataclass(frozen=True, eq=False)
class FoldingResult:
    """Distance of one orbit from its closest symmetric configuration.

    ``mean_distance`` is the mean point-to-image distance, ``d`` half of it
    and ``sd = 1 - d``.
    """

    orbit: tuple
    symmetric_image: np.ndarray
    mean_distance: float

    @property
    def d(self) -> float:
        return 0.5 * self.mean_distance

    @property
    def sd(self) -> float:
        return 1.0 - 0.5 * self.mean_distance


def _optimal_data_points(Y, eps):
    """Per group, the index of an input point that is itself a geometric median, or -1.

    A point ``y_j`` of multiplicity ``m`` minimizes the summed distance iff
    the unit vectors from it to the other points sum to length at most ``m``.
    """
    diff = Y[:, None, :, :] - Y[:, :, None, :]  # (B, j, i, 2): y_i - y_j
    dist = np.hypot(diff[..., 0], diff[..., 1])
    same = dist <= eps
    unit = np.where(same[..., None], 0.0, diff / np.where(same, 1.0, dist)[..., None])
    pull = np.hypot(*unit.sum(axis=2).transpose(2, 0, 1))
    ok = pull <= same.sum(axis=2) * (1.0 + 1e-12)
    first = np.argmax(ok, axis=1)
    return np.where(ok.any(axis=1), first, -1)


def _summed_distance(Y, q):
    d = Y - q[:, None, :]
    return np.hypot(d[..., 0], d[..., 1]).sum(axis=1)


def _prefer_newton(Y, q, q_weiszfeld, diff, w, R, eta):
    """Replace the Weiszfeld update by a Newton step wherever that lowers the objective.

    Weiszfeld converges only linearly when the median sits close to a data
    point; Newton on the smooth part fixes that tail.  Taking the better of
    the two keeps every step a descent step.
    """
    # Hessian of the summed distance: sum (I - u u^T) / d
    u = diff * w[..., None]
    wx = (w * (1.0 - u[..., 0] ** 2)).sum(axis=1)
    wy = (w * (1.0 - u[..., 1] ** 2)).sum(axis=1)
    wxy = -(w * u[..., 0] * u[..., 1]).sum(axis=1)
    det = wx * wy - wxy * wxy
    good = (eta == 0) & (det > 1e-300)
    safe = np.where(good, det, 1.0)
    # gradient of the objective is -R
    sx = (wy * R[:, 0] - wxy * R[:, 1]) / safe
    sy = (wx * R[:, 1] - wxy * R[:, 0]) / safe
    q_newton = q + np.stack([sx, sy], axis=1)
    use = good & (_summed_distance(Y, q_newton) < _summed_distance(Y, q_weiszfeld))
    return np.where(use[:, None], q_newton, q_weiszfeld)


def geometric_median(Y, tol=1e-10, max_iter=5000):
    """Batched geometric median of point groups ``Y`` with shape (B, s, 2).

    Groups whose median is one of the input points are answered exactly.
    The rest run Weiszfeld iteration with the Vardi-Zhang correction until
    the convexity bound ``F(q) - F* <= |grad F(q)| * diameter`` certifies the
    summed distance to within ``tol`` (relative to the point spread).
    """
    Y = np.asarray(Y, dtype=float)
    q = Y.mean(axis=1)
    if not Y.size:
        return q
    span = Y.max(axis=1) - Y.min(axis=1)
    diam = np.hypot(span[:, 0], span[:, 1])
    scale = max(1.0, float(np.abs(Y).max()))
    eps = 1e-15 * scale
    active = diam > eps
    if Y.shape[1] <= 64:
        hit = _optimal_data_points(Y, eps)
        done = hit >= 0
        q[done] = Y[np.flatnonzero(done), hit[done]]
        active &= ~done
    bound = tol * np.maximum(diam, eps) * Y.shape[1]
    for _ in range(max_iter):
        if not np.any(active):
            break
        idx = np.flatnonzero(active)
        ya = Y[idx]
        qa = q[idx]
        diff = ya - qa[:, None, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        at = dist <= eps
        w = np.where(at, 0.0, 1.0 / np.where(at, 1.0, dist))
        wsum = w.sum(axis=1)
        all_at = wsum == 0.0
        safe = np.where(all_at, 1.0, wsum)
        T = (w[..., None] * ya).sum(axis=1) / safe[:, None]
        eta = at.sum(axis=1)
        R = (w[..., None] * diff).sum(axis=1)
        r = np.hypot(R[:, 0], R[:, 1])
        # the subgradient closest to zero has length max(r - eta, 0)
        certified = (np.maximum(r - eta, 0.0) * diam[idx] <= bound[idx]) | all_at
        gamma = np.where(eta > 0, np.minimum(1.0, eta / np.where(r > 0, r, 1.0)), 0.0)
        gamma = np.where((eta > 0) & (r == 0), 1.0, gamma)
        qn = (1.0 - gamma)[:, None] * T + gamma[:, None] * qa
        qn = _prefer_newton(ya, qa, qn, diff, w, R, eta)
        qn = np.where((all_at | certified)[:, None], qa, qn)
        step = np.hypot(*(qn - qa).T)
        q[idx] = qn
        active[idx[certified | (step <= 1e-16 * scale)]] = False
    return q


def _merge(Y, method):
    if method == "mean":
        return Y.mean(axis=1)
    if method == "median":
        if Y.shape[1] <= 2:
            return Y.mean(axis=1)
        return geometric_median(Y)
    raise ValueError(f"unknown fold method {method!r}")


def _fold_rotational_batch(P, orbits, frame: RotationFrame, method):
    """Fold same-size orbits together; returns (images, mean distances)."""
    s = len(orbits[0])
    pts = P[np.asarray(orbits)]  # (B, s, 2)
    c = np.asarray(frame.center, dtype=float)
    if s == 1:
        img = np.broadcast_to(c, pts.shape).copy()
    else:
        ang = TWO_PI * frame.multiplier * np.arange(s) / s
        unf = rotate(pts, -ang[None, :], c)
        q = _merge(unf, method)
        img = rotate(np.repeat(q[:, None, :], s, axis=1), ang[None, :], c)
    dist = np.hypot(*(pts - img).transpose(2, 0, 1))
    return img, dist.mean(axis=1)


def _fold_axial_batch(P, orbits, frame: AxisFrame, method):
    s = len(orbits[0])
    pts = P[np.asarray(orbits)]
    axis = frame.axis
    if s == 1:
        img = axis.project(pts)
    else:
        unf = np.stack([pts[:, 0], axis.reflect(pts[:, 1])], axis=1)
        q = _merge(unf, method)
        img = np.stack([q, axis.reflect(q)], axis=1)
    dist = np.hypot(*(pts - img).transpose(2, 0, 1))
    return img, dist.mean(axis=1)


def _check_sizes(orbits, frame):
    for o in orbits:
        s = len(o)
        if isinstance(frame, RotationFrame):
            if frame.k % s != 0:
                raise OrbitSizeMismatch(f"orbit of size {s} does not divide rotation order {frame.k}")
        elif s not in (1, 2):
            raise OrbitSizeMismatch(f"axial orbit must have 1 or 2 vertices, got {s}")


def fold_orbits(P, orbits, frame, method="median") -> list:
    """Fold every orbit of ``P`` (normalized positions) under one frame."""
    P = np.asarray(P, dtype=float)
    _check_sizes(orbits, frame)
    by_size = {}
    for i, o in enumerate(orbits):
        by_size.setdefault(len(o), []).append(i)
    results = [None] * len(orbits)
    fold = _fold_rotational_batch if isinstance(frame, RotationFrame) else _fold_axial_batch
    for s, ids in sorted(by_size.items()):
        group = [orbits[i] for i in ids]
        imgs, dists = fold(P, group, frame, method)
        for j, i in enumerate(ids):
            results[i] = FoldingResult(tuple(orbits[i]), imgs[j], float(dists[j]))
    return results


def fold_orbit(orbit_points, frame, method="median") -> FoldingResult:
    """Fold a single orbit whose points are listed in automorphism cyclic order.

    ``frame`` is a :class:`RotationFrame` (the ``i``-th point is unrotated by
    ``2*pi*i*multiplier/s`` about the centre, ``s`` the orbit size) or an
    :class:`AxisFrame` (a pair is folded across the axis, a fixed vertex is
    projected onto it).  Positions should already be normalized to the unit
    circle for the score to lie in [0, 1].
    """
    pts = np.asarray(orbit_points, dtype=float).reshape(-1, 2)
    return fold_orbits(pts, [tuple(range(len(pts)))], frame, method)[0]


# ---------------------------------------------------------------------------
# approximate detection for an automorphism
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ApproxSymmetry:
    """Per-orbit foldings of a drawing for one automorphism and frame.

    ``frame`` is in normalized coordinates; ``scale`` and ``translation`` map
    drawing coordinates to them (``(p + translation) * scale``).
    """

    foldings: list
    frame: object
    scale: float
    translation: np.ndarray

    @property
    def total_distance(self) -> float:
        return float(sum(f.d for f in self.foldings))

    def frame_in_drawing(self) -> dict:
        if isinstance(self.frame, RotationFrame):
            c = np.asarray(self.frame.center) / self.scale - self.translation
            return {
                "type": "rotation",
                "center": [float(c[0]), float(c[1])],
                "order": self.frame.k,
                "multiplier": self.frame.multiplier,
            }
        ax = self.frame.axis
        p = np.asarray(ax.point) / self.scale - self.translation
        return {
            "type": "axis",
            "point": [float(p[0]), float(p[1])],
            "direction": [float(ax.direction[0]), float(ax.direction[1])],
        }


def normalized_positions(d: Drawing):
    ps, scale, translation = normalize_to_unit_circle(PointSet(d.positions))
    return ps.points, scale, translation


def _units(k):
    return [j for j in range(1, k) if math.gcd(j, k) == 1] or [1]


def _orbit_centroids(P, orbits):
    return np.array([P[list(o)].mean(axis=0) for o in orbits])


def _canonical_orientation(P, pts):
    """``pts`` turned so the principal axis of ``P`` lies along x.

    L1 distance depends on the orientation of the coordinate axes, though
    not on quarter turns or axis flips, so fixing the principal axis makes
    the L1 centre choice independent of how the drawing is rotated.
    """
    cov = P.T @ P / len(P)
    u, isotropic = top_eigenvector_2x2(cov)
    if isotropic:
        return pts
    return pts @ np.array([[u[0], -u[1]], [u[1], u[0]]])


def candidate_frames(P, phi: Automorphism, method="median") -> list:
    """Frames worth trying for ``phi`` on normalized positions ``P``.

    Rotations: the centre is the orbit centroid closest (summed L1) to the
    others; every rotation multiplier coprime to the order is a candidate, as
    the drawing may display the permutation as rotation by any primitive
    angle.  Reflections: principal and minor covariance axes plus the
    least-squares mirror line for the pairing, all through the centroid.
    """
    orbits = phi.orbits
    if phi.is_rotational:
        k = phi.order
        cents = _orbit_centroids(P, orbits)

        def own_sd(i):
            o = orbits[i]
            best = min(
                fold_orbits(P, [o], RotationFrame(cents[i], k, j), method)[0].mean_distance
                for j in _units(len(o))
            ) if len(o) > 1 else 0.0
            return 1.0 - 0.5 * best

        ci = rotation_center_index(_canonical_orientation(P, cents), own_sd)
        center = cents[ci]
        return [RotationFrame(center, k, j) for j in _units(k)]
    origin = np.zeros(2)
    lines = []
    try:
        pa = principal_axis(PointSet(P))
        lines += [Line(origin, pa.direction), Line(origin, pa.direction).perpendicular()]
    except DegeneratePointSet:
        lines.append(Line(origin, np.array([1.0, 0.0])))
    ca = correspondence_axis(P, phi.mapping, origin)
    lines += [ca, ca.perpendicular()]
    lines += voted_bisectors(P, phi.mapping)
    uniq = []
    for ln in lines:
        if not any(_same_line(ln, u) for u in uniq):
            uniq.append(ln)
    return [AxisFrame(ln) for ln in uniq]


def _same_line(a: Line, b: Line, tol=1e-12) -> bool:
    if abs(abs(a.direction @ b.direction) - 1.0) > tol:
        return False
    rel = np.asarray(b.point) - np.asarray(a.point)
    return abs(rel[0] * a.direction[1] - rel[1] * a.direction[0]) <= tol


def voted_bisectors(P, mapping, top=3, tol=1e-9) -> list:
    """Mirror lines shared by the most swapped pairs.

    Each pair ``(u, mapping[u])`` votes for its perpendicular bisector; lines
    backed by at least two pairs are returned, most votes first.  Pairs that
    are already mirror images agree exactly on the line, so the axis survives
    even when the covariance of the whole drawing has been skewed.
    """
    mapping = np.asarray(mapping)
    u = np.flatnonzero(mapping > np.arange(len(mapping)))
    if len(u) < 2:
        return []
    a, b = P[u], P[mapping[u]]
    diff = b - a
    length = np.hypot(diff[:, 0], diff[:, 1])
    ok = length > tol
    if ok.sum() < 2:
        return []
    normal = diff[ok] / length[ok, None]
    mid = 0.5 * (a[ok] + b[ok])
    # canonical normal angle in [0, pi) and signed offset along it
    theta = np.arctan2(normal[:, 1], normal[:, 0])
    flip = (theta < 0) | (theta >= np.pi)
    normal[flip] *= -1
    theta = np.mod(theta, np.pi)
    # angles near pi are the same line as angles near 0 with the normal flipped
    wrap = theta > np.pi - tol
    theta[wrap] -= np.pi
    normal[wrap] *= -1
    offset = np.einsum("ij,ij->i", normal, mid)
    order = np.lexsort((offset, theta))
    th, off = theta[order], offset[order]
    groups = []
    start = 0
    for i in range(1, len(th) + 1):
        if i == len(th) or th[i] - th[start] > tol or abs(off[i] - off[start]) > tol:
            if i - start >= 2:
                groups.append((i - start, start))
            start = i
    groups.sort(key=lambda x: (-x[0], x[1]))
    out = []
    for _, s in groups[:top]:
        nrm = normal[order[s]]
        direction = canonical_direction(np.array([-nrm[1], nrm[0]]))
        out.append(Line(nrm * off[s], direction))
    return out


def _frame_from_user(center_or_axis, phi, scale, translation):
    if isinstance(center_or_axis, (RotationFrame, AxisFrame)):
        return center_or_axis
    if isinstance(center_or_axis, Line):
        p = (np.asarray(center_or_axis.point, dtype=float) + translation) * scale
        u = np.asarray(center_or_axis.direction, dtype=float)
        return AxisFrame(Line(p, u / np.hypot(*u)))
    c = (np.asarray(center_or_axis, dtype=float) + translation) * scale
    return RotationFrame(c, phi.order, 1)


def approx_sym(g: Graph, d: Drawing, phi: Automorphism, center_or_axis=None, method="median") -> ApproxSymmetry:
    """Fold every orbit of ``phi`` in the normalized drawing.

    Without an explicit centre (a point) or axis (a :class:`Line`), candidate
    frames are generated and the one with the least total distance is kept.
    A user-supplied rotation centre still has its multiplier chosen this way.
    """
    if d.graph is not g and d.graph != g:
        raise GraphMismatch("drawing belongs to a different graph")
    if phi.graph is not g and phi.graph != g:
        raise GraphMismatch("automorphism belongs to a different graph")
    P, scale, translation = normalized_positions(d)
    if center_or_axis is None:
        frames = candidate_frames(P, phi, method)
    else:
        fr = _frame_from_user(center_or_axis, phi, scale, translation)
        if isinstance(fr, RotationFrame) and not isinstance(center_or_axis, RotationFrame):
            frames = [RotationFrame(fr.center, phi.order, j) for j in _units(phi.order)]
        else:
            frames = [fr]
    best = None
    for fr in frames:
        res = ApproxSymmetry(fold_orbits(P, phi.orbits, fr, method), fr, scale, translation)
        if best is None or res.total_distance < best.total_distance - 1e-15:
            best = res
    return best


def all_fits(g: Graph, d: Drawing, phi: Automorphism, method="median") -> list:
    """Approximate fits for every candidate frame (used by the scorer)."""
    if d.graph is not g and d.graph != g:
        raise GraphMismatch("drawing belongs to a different graph")
    if phi.graph is not g and phi.graph != g:
        raise GraphMismatch("automorphism belongs to a different graph")
    P, scale, translation = normalized_positions(d)
    return [
        ApproxSymmetry(fold_orbits(P, phi.orbits, fr, method), fr, scale, translation)
        for fr in candidate_frames(P, phi, method)
    ]
