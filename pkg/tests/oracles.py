"""Independent reference implementations used by the tests.

Nothing here calls into the package's detection or folding code.
"""

import math

import numpy as np
from scipy.optimize import minimize

TOL = 1e-7


def _normalized(P):
    P = np.asarray(P, dtype=float)
    rel = P - P.mean(axis=0)
    r = np.hypot(rel[:, 0], rel[:, 1]).max()
    return rel / r if r > 0 else rel


def _maps_to_itself(P, Q, tol=TOL):
    used = set()
    for q in Q:
        d = np.hypot(*(P - q).T)
        hits = [i for i in np.flatnonzero(d <= tol) if i not in used]
        if not hits:
            return False
        used.add(hits[0])
    return True


def brute_rotation_order(P, tol=TOL):
    """Largest k with the set invariant under rotation by 2*pi/k about its centroid."""
    P = _normalized(P)
    for k in range(len(P), 1, -1):
        a = 2 * math.pi / k
        R = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
        if _maps_to_itself(P, P @ R.T, tol):
            return k
    return 1


def brute_axes(P, tol=TOL):
    """Mirror-line angles in [0, pi) through the centroid, by trying every
    point direction and every pair bisector."""
    P = _normalized(P)
    cands = []
    for p in P:
        if np.hypot(*p) > tol:
            cands.append(math.atan2(p[1], p[0]))
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            d = P[i] - P[j]
            if np.hypot(*d) > tol:
                cands.append(math.atan2(d[0], -d[1]))
    found = []
    for ang in cands:
        ang %= math.pi
        u = np.array([math.cos(ang), math.sin(ang)])
        Q = 2 * np.outer(P @ u, u) - P
        if _maps_to_itself(P, Q, tol):
            if not any(min(abs(ang - f), math.pi - abs(ang - f)) < 1e-6 for f in found):
                found.append(ang)
    return sorted(found)


def same_angles(a, b, tol=1e-6):
    if len(a) != len(b):
        return False
    for x in a:
        if not any(min(abs(x - y), math.pi - abs(x - y)) < tol for y in b):
            return False
    return True


def symmetric_images(frame_kind, v, n, center=None, k=None, mult=1, axis=None):
    """Configuration generated from the free point ``v``."""
    if frame_kind == "rotation":
        out = []
        for i in range(n):
            a = 2 * math.pi * mult * i / k
            R = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
            out.append(center + R @ (v - center))
        return np.array(out)
    p, u = axis
    if n == 1:
        # free parameter moves along the axis
        return np.array([p + v[0] * u])
    rel = v - p
    refl = p + 2 * (rel @ u) * u - rel
    return np.array([v, refl])


def best_fold_distance(points, frame_kind, **frame):
    """Least mean distance to a symmetric configuration: coarse grid, then Nelder-Mead."""
    points = np.asarray(points, dtype=float)
    n = len(points)

    def cost(v):
        img = symmetric_images(frame_kind, np.asarray(v), n, **frame)
        return float(np.hypot(*(points - img).T).mean())

    grid = np.linspace(-1.6, 1.6, 33)
    starts = sorted(((cost((x, y)), (x, y)) for x in grid for y in grid))[:6]
    best = min(s[0] for s in starts)
    for _, v0 in starts:
        r = minimize(cost, v0, method="Nelder-Mead",
                     options={"xatol": 1e-11, "fatol": 1e-13, "maxiter": 20000})
        best = min(best, r.fun)
    return best


def _ring(k, r, phase):
    a = phase + 2 * math.pi * np.arange(k) / k
    return np.stack([r * np.cos(a), r * np.sin(a)], axis=1)


def symmetric_point_set(rng, max_n=10):
    """A point set with a built-in rotational and/or mirror symmetry."""
    kind = rng.choice(["cyclic", "dihedral", "axial"])
    pts = []
    if kind == "axial":
        for _ in range(rng.integers(1, 5)):
            x, y = rng.uniform(0.1, 1), rng.uniform(-1, 1)
            pts += [(x, y), (-x, y)]
        for _ in range(rng.integers(0, 3)):
            pts.append((0.0, rng.uniform(-1, 1)))
    else:
        k = int(rng.integers(2, 6))
        budget = max_n - 1
        while len(pts) + k <= budget:
            r = rng.uniform(0.2, 1.0)
            if kind == "cyclic":
                pts += list(_ring(k, r, rng.uniform(0, 2 * math.pi)))
            elif rng.random() < 0.5 or len(pts) + 2 * k > budget:
                pts += list(_ring(k, r, 0.0))
            else:
                a = rng.uniform(0.05, math.pi / k - 0.05)
                pts += list(_ring(k, r, a)) + list(_ring(k, r, -a))
            if rng.random() < 0.4:
                break
        if rng.random() < 0.3:
            pts.append((0.0, 0.0))
    return np.array(pts[:max_n], dtype=float)


def similarity(P, rng):
    a = rng.uniform(0, 2 * math.pi)
    R = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    return rng.uniform(0.5, 20) * P @ R.T + rng.uniform(-5, 5, size=2)


def oracle_point_sets(count=200, seed=0):
    """Seeded mix: symmetric constructions, perturbed copies and generic sets."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        r = rng.random()
        P = symmetric_point_set(rng)
        if len(P) < 2:
            continue
        if r < 0.5:
            label = "symmetric"
        elif r < 0.85:
            P = P.copy()
            i = rng.integers(len(P))
            P[i] += rng.uniform(1e-3, 5e-2) * rng.normal(size=2)
            label = "perturbed"
        else:
            P = rng.uniform(-1, 1, size=(int(rng.integers(3, 11)), 2))
            label = "generic"
        out.append((label, similarity(P, rng)))
    return out


def oracle_orbits(count=100, seed=0):
    """Seeded orbits of size <= 8 with a fold frame: (points, frame_kind, frame_kwargs)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        if i % 4 == 3:
            u = rng.normal(size=2)
            u /= np.hypot(*u)
            p = rng.uniform(-0.3, 0.3, size=2)
            n = 1 if rng.random() < 0.25 else 2
            pts = rng.uniform(-0.7, 0.7, size=(n, 2))
            out.append((pts, "axis", {"axis": (p, u)}))
        else:
            s = int(rng.integers(2, 9))
            mult = int(rng.choice([j for j in range(1, s) if math.gcd(j, s) == 1] or [1]))
            c = rng.uniform(-0.2, 0.2, size=2)
            base = _ring(s, rng.uniform(0.3, 0.8), rng.uniform(0, 2 * math.pi))[(mult * np.arange(s)) % s]
            pts = c + base + rng.normal(scale=rng.choice([0.01, 0.1, 0.3]), size=(s, 2))
            out.append((pts, "rotation", {"center": c, "k": s, "mult": mult}))
    return out
