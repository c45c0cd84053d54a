"""2D point-set primitives used by the symmetry detectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegeneratePointSet, NonFinite

TWO_PI = 2.0 * np.pi

# relative tolerance for treating the two covariance eigenvalues as equal
ISOTROPY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class PointSet:
    points: np.ndarray
    centroid: np.ndarray = field(init=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise NonFinite("point set contains non-finite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        c = pts.mean(axis=0) if len(pts) else np.zeros(2)
        c.setflags(write=False)
        object.__setattr__(self, "centroid", c)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class Line:
    """Line through ``point`` with unit ``direction``."""

    point: np.ndarray
    direction: np.ndarray

    def reflect(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        u = np.asarray(self.direction, dtype=float)
        rel = pts - self.point
        along = rel @ u
        return self.point + 2.0 * np.multiply.outer(along, u) - rel

    def project(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        u = np.asarray(self.direction, dtype=float)
        return self.point + np.multiply.outer((pts - self.point) @ u, u)

    @property
    def angle(self) -> float:
        """Direction angle folded into [0, pi)."""
        return float(np.arctan2(self.direction[1], self.direction[0]) % np.pi)

    def perpendicular(self) -> "Line":
        return Line(self.point, canonical_direction(np.array([-self.direction[1], self.direction[0]])))


@dataclass(frozen=True)
class AngularSignature:
    """Points sorted by (angle, radius, index) about ``center``."""

    angles: np.ndarray
    radii: np.ndarray
    indices: np.ndarray
    center: np.ndarray

    def __len__(self):
        return len(self.indices)


def normalize_to_unit_circle(ps: PointSet):
    """Translate the centroid to the origin and scale the farthest point to radius 1.

    Returns ``(normalized, scale, translation)`` such that
    ``normalized = (points + translation) * scale``.
    """
    if len(ps) == 0:
        raise DegeneratePointSet("empty point set")
    translation = -ps.centroid
    rel = ps.points + translation
    rmax = float(np.max(np.hypot(rel[:, 0], rel[:, 1])))
    if rmax == 0.0:
        return PointSet(np.zeros_like(rel)), 1.0, translation
    scale = 1.0 / rmax
    return PointSet(rel * scale), scale, translation


def polar(pts, center) -> tuple:
    rel = np.asarray(pts, dtype=float) - np.asarray(center, dtype=float)
    radii = np.hypot(rel[:, 0], rel[:, 1])
    angles = np.mod(np.arctan2(rel[:, 1], rel[:, 0]), TWO_PI)
    return angles, radii


def angular_signature(ps: PointSet, center) -> AngularSignature:
    center = np.asarray(center, dtype=float)
    angles, radii = polar(ps.points, center)
    scale = float(radii.max()) if len(radii) else 0.0
    at_center = radii <= 1e-12 * max(scale, 1e-300)
    angles = np.where(at_center, 0.0, angles)
    radii = np.where(at_center, 0.0, radii)
    # 2*pi can appear after the modulo for tiny negative angles
    angles = np.where(angles >= TWO_PI, 0.0, angles)
    idx = np.arange(len(radii))
    order = np.lexsort((idx, radii, angles))
    return AngularSignature(angles[order], radii[order], idx[order], center)


def l1_distance_sums(pts) -> np.ndarray:
    """Summed L1 distance from every point to all points, via sorted sweeps."""
    pts = np.asarray(pts, dtype=float)
    n = len(pts)
    total = np.zeros(n)
    for axis in range(2):
        x = pts[:, axis]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        prefix = np.concatenate(([0.0], np.cumsum(xs)))
        i = np.arange(n)
        below = xs * i - prefix[:-1]
        above = (prefix[-1] - prefix[1:]) - xs * (n - 1 - i)
        sums = np.empty(n)
        sums[order] = below + above
        total += sums
    return total


def rotation_center_index(orbit_centroids, orbit_sds: Callable[[int], float] | None = None) -> int:
    """Index of the centroid with least summed L1 distance to the others.

    Ties (within round-off) go to the orbit with the largest ``orbit_sds(i)``,
    then to the lowest index.
    """
    c = np.asarray(orbit_centroids, dtype=float).reshape(-1, 2)
    if len(c) == 0:
        raise DegeneratePointSet("no orbit centroids")
    sums = l1_distance_sums(c)
    best = sums.min()
    tol = 1e-12 * max(1.0, float(np.abs(c).max()) * len(c))
    tied = np.flatnonzero(sums <= best + tol)
    if len(tied) == 1 or orbit_sds is None:
        return int(tied[0])
    # identical centroids do not need a tie-break
    if np.all(np.abs(c[tied] - c[tied[0]]).max(axis=1) <= tol):
        return int(tied[0])
    sds = [orbit_sds(int(i)) for i in tied]
    return int(tied[int(np.argmax(sds))])


def rotation_center(orbit_centroids, orbit_sds: Callable[[int], float] | None = None) -> np.ndarray:
    c = np.asarray(orbit_centroids, dtype=float).reshape(-1, 2)
    return c[rotation_center_index(c, orbit_sds)].copy()


def canonical_direction(u):
    u = np.asarray(u, dtype=float)
    u = u / np.hypot(u[0], u[1])
    if u[0] < 0 or (u[0] == 0 and u[1] < 0):
        u = -u
    return u + 0.0


def top_eigenvector_2x2(m) -> tuple:
    """Closed-form eigen-direction for the larger eigenvalue of a symmetric 2x2 matrix.

    Returns ``(direction, isotropic)``; an isotropic matrix yields ``(1, 0)``.
    """
    a, b, c = float(m[0][0]), 0.5 * (float(m[0][1]) + float(m[1][0])), float(m[1][1])
    half_gap = np.hypot(0.5 * (a - c), b)
    scale = abs(a) + abs(c) + 2 * abs(b)
    if scale == 0.0 or half_gap <= ISOTROPY_RTOL * scale:
        return np.array([1.0, 0.0]), True
    lam = 0.5 * (a + c) + half_gap
    # pick the better-conditioned of the two equivalent eigenvector formulas
    v1 = np.array([b, lam - a])
    v2 = np.array([lam - c, b])
    v = v1 if np.hypot(*v1) > np.hypot(*v2) else v2
    return canonical_direction(v), False


def principal_axis(ps: PointSet) -> Line:
    """Line through the centroid along the dominant covariance direction."""
    rel = ps.points - ps.centroid
    if len(ps) < 2 or not np.any(rel):
        raise DegeneratePointSet("principal axis needs at least two distinct points")
    cov = rel.T @ rel / len(ps)
    u, _ = top_eigenvector_2x2(cov)
    return Line(ps.centroid.copy(), u)


def correspondence_axis(points, mapping, center) -> Line:
    """Least-squares mirror line through ``center`` for a known pairing.

    Maximizes ``sum_u p_u . R p_mapping[u]`` over reflections ``R``; with the
    identity pairing this reduces to the principal axis.
    """
    rel = np.asarray(points, dtype=float) - center
    img = rel[np.asarray(mapping)]
    m = 0.5 * (rel.T @ img + img.T @ rel)
    u, _ = top_eigenvector_2x2(m)
    return Line(np.asarray(center, dtype=float).copy(), u)


def rotate(pts, angle, center=(0.0, 0.0)) -> np.ndarray:
    """Rotate points counter-clockwise; ``angle`` may be an array matching ``pts``."""
    pts = np.asarray(pts, dtype=float)
    center = np.asarray(center, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    rel = pts - center
    x = c * rel[..., 0] - s * rel[..., 1]
    y = s * rel[..., 0] + c * rel[..., 1]
    return np.stack([x, y], axis=-1) + center
