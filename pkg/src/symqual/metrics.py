"""Symmetry-quality scores for one automorphism (SQ1, SQ2) and for a group (SQG)."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .detect import all_fits, approx_sym
from .graph import Automorphism, AutomorphismGroup, Drawing, Graph

DEFAULT_EPS = 1e-4


def default_eps() -> float:
    """Orbit threshold on ``d``; ``SYMQUAL_EPS`` overrides the built-in 1e-4."""
    val = os.environ.get("SYMQUAL_EPS")
    if val is None or val == "":
        return DEFAULT_EPS
    eps = float(val)
    if not eps >= 0:
        raise ValueError(f"SYMQUAL_EPS must be a non-negative number, got {val!r}")
    return eps


@dataclass(frozen=True)
class OrbitAssessment:
    orbit: tuple
    sd: float
    symmetric: bool


@dataclass(frozen=True, eq=False)
class ScoreReport:
    sq1: float
    sq2: float
    sq2_unclamped: float
    per_orbit: tuple
    frame: dict
    total_distance: float = 0.0

    @property
    def n_symmetric(self) -> int:
        return sum(1 for o in self.per_orbit if o.symmetric)

    @property
    def all_symmetric(self) -> bool:
        return all(o.symmetric for o in self.per_orbit)

    @property
    def mean_sd(self) -> float:
        return float(np.mean([o.sd for o in self.per_orbit]))

    def to_dict(self) -> dict:
        return {
            "sq1": self.sq1,
            "sq2": self.sq2,
            "sq2_unclamped": self.sq2_unclamped,
            "mean_sd": self.mean_sd,
            "symmetric_orbits": self.n_symmetric,
            "orbits": [
                {"vertices": list(o.orbit), "sd": o.sd, "symmetric": o.symmetric} for o in self.per_orbit
            ],
            "frame": self.frame,
        }


@dataclass(frozen=True, eq=False)
class GroupScoreReport:
    sqg1: float
    sqg2: float
    weight: int
    per_automorphism: tuple  # (K, ScoreReport) in group element order
    exact_count: int

    def to_dict(self) -> dict:
        return {
            "sqg1": self.sqg1,
            "sqg2": self.sqg2,
            "weight": self.weight,
            "exact_count": self.exact_count,
            "elements": [
                {"K": k, "sq1": r.sq1, "sq2": r.sq2, "frame": r.frame} for k, r in self.per_automorphism
            ],
        }


def scores_from_sd(sds, eps=DEFAULT_EPS):
    """(SQ1, SQ2, unclamped SQ2, symmetric flags) from per-orbit ``sd`` values."""
    sds = np.asarray(sds, dtype=float)
    sym = (1.0 - sds) <= eps
    total = len(sds)
    n_sym = int(sym.sum())
    if n_sym == total:
        return 1.0, 1.0, 1.0, sym
    mean_asym = float(sds[~sym].mean())
    sq1 = 0.5 * (n_sym / total + mean_asym)
    raw = (1 + n_sym) / total - (1.0 - mean_asym)
    sq2 = min(1.0, max(0.0, raw))
    return sq1, sq2, raw, sym


def _report(fit, eps) -> ScoreReport:
    sds = [f.sd for f in fit.foldings]
    sq1, sq2, raw, sym = scores_from_sd(sds, eps)
    per = tuple(OrbitAssessment(f.orbit, float(f.sd), bool(s)) for f, s in zip(fit.foldings, sym))
    return ScoreReport(sq1, sq2, raw, per, fit.frame_in_drawing(), fit.total_distance)


def sq(g: Graph, d: Drawing, phi: Automorphism, eps: float | None = None, center_or_axis=None,
       method="median") -> ScoreReport:
    """Score how well ``d`` displays ``phi``.

    Every candidate frame is scored and the best kept (highest SQ1 + SQ2,
    then least total distance).  An explicit centre or axis disables the
    search over positions.
    """
    eps = default_eps() if eps is None else eps
    if center_or_axis is not None:
        return _report(approx_sym(g, d, phi, center_or_axis, method), eps)
    best = None
    key = None
    for fit in all_fits(g, d, phi, method):
        rep = _report(fit, eps)
        k = (rep.sq1 + rep.sq2, -rep.total_distance)
        if key is None or k > key:
            best, key = rep, k
    return best


def sqg(g: Graph, d: Drawing, group: AutomorphismGroup, eps: float | None = None, method="median") -> GroupScoreReport:
    """Weighted group score; drawings displaying any element exactly land in [0.5, 1]."""
    eps = default_eps() if eps is None else eps
    per = []
    for phi in group.elements:
        per.append((phi.weight, sq(g, d, phi, eps=eps, method=method)))
    w = sum(k for k, _ in per)
    s1 = sum(k * r.sq1 for k, r in per) / w
    s2 = sum(k * r.sq2 for k, r in per) / w
    exact = sum(1 for _, r in per if r.all_symmetric)
    if exact == 0:
        sqg1, sqg2 = 0.5 * s1, 0.5 * s2
    else:
        sqg1, sqg2 = 0.5 * (1 + s1), 0.5 * (1 + s2)
    return GroupScoreReport(sqg1, sqg2, w, tuple(per), exact)
