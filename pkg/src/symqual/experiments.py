"""Experiment harness: perturbation series, subgroup-display series, layout comparison.

Perturbation plans
------------------
A plan moves whole orbits of one automorphism.  Every destroyed orbit gets a
fixed displacement pattern whose vectors sum to zero, scaled by an amplitude
that only grows from step to step.  Zero-sum patterns keep each orbit
centroid (and so the rotation centre and the global centroid) in place, and
folding is linear in the amplitude, so an orbit's distance from symmetry grows
in proportion to it.  One anchor vertex is pushed out to a far ring of radius
``far * R`` at the first step; no later point goes further, so the
normalization scale is the same for every perturbed step.

New orbits are destroyed at a common distance ``d0`` (the largest the anchor
allows) and later steps push the other destroyed orbits further.  When a
single destroyed orbit at ``d0`` would score SQ2 above SQ1 the first step
destroys two orbits at once.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import layouts
from .catalog import catalog, entry
from .detect import AxisFrame, RotationFrame, approx_sym, fold_orbits
from .errors import PlanInvalid, SymQualError
from .generators import gen_axial, gen_rotational
from .geometry import Line
from .graph import AutomorphismGroup, Drawing, Graph, validate_automorphism
from .metrics import sq, sqg

METRICS = ("sd", "sq1", "sq2", "sqg1", "sqg2")


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


@dataclass
class Row:
    label: str
    sd: float | None = None
    sq1: float | None = None
    sq2: float | None = None
    sqg1: float | None = None
    sqg2: float | None = None

    def values(self):
        return [getattr(self, m) for m in METRICS]


@dataclass
class ExperimentResult:
    rows: list
    metadata: dict = field(default_factory=dict)

    def column(self, name) -> list:
        return [getattr(r, name) for r in self.rows]


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".9g")


def emit_csv(r: ExperimentResult) -> bytes:
    if not r.rows:
        raise ValueError("empty result")
    buf = io.StringIO()
    buf.write("label," + ",".join(METRICS) + "\n")
    for row in r.rows:
        buf.write(",".join([row.label] + [_fmt(v) for v in row.values()]) + "\n")
    return buf.getvalue().encode("utf-8")


_COLORS = {"sd": "#7f7f7f", "sq1": "#1f77b4", "sq2": "#d62728", "sqg1": "#2ca02c", "sqg2": "#9467bd"}


def _esc(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


def emit_svg_chart(r: ExperimentResult, title: str = "") -> bytes:
    """Line chart of every metric column that has values, y fixed to [0, 1]."""
    if not r.rows:
        raise ValueError("empty result")
    w, h = 640, 360
    left, right, top, bottom = 50, 110, 30, 60
    pw, ph = w - left - right, h - top - bottom
    n = len(r.rows)

    def x_of(i):
        return left + (pw * i / (n - 1) if n > 1 else pw / 2)

    def y_of(v):
        return top + ph * (1.0 - min(1.0, max(0.0, v)))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<text x="{left}" y="18" font-family="sans-serif" font-size="13">{_esc(title)}</text>',
    ]
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = y_of(t)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" font-family="sans-serif" font-size="10" '
                   f'text-anchor="end">{t:.2f}</text>')
    for i, row in enumerate(r.rows):
        x = x_of(i)
        out.append(f'<text x="{x:.2f}" y="{top + ph + 14}" font-family="sans-serif" font-size="9" '
                   f'text-anchor="end" transform="rotate(-40 {x:.2f} {top + ph + 14})">{_esc(row.label)}</text>')
    legend_y = top + 10
    for m in METRICS:
        pts = [(x_of(i), y_of(v)) for i, v in enumerate(r.column(m))
               if v is not None and not (isinstance(v, float) and math.isnan(v))]
        if not pts:
            continue
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{_COLORS[m]}" stroke-width="2" points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="{_COLORS[m]}"/>')
        lx = left + pw + 15
        out.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 20}" y2="{legend_y}" stroke="{_COLORS[m]}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{legend_y + 4}" font-family="sans-serif" font-size="11">{m}</text>')
        legend_y += 18
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def write_result(r: ExperimentResult, out_dir, experiment: str, name: str) -> tuple:
    d = Path(out_dir) / experiment
    d.mkdir(parents=True, exist_ok=True)
    csv_path = d / f"{name}.csv"
    svg_path = d / f"{name}.svg"
    csv_path.write_bytes(emit_csv(r))
    svg_path.write_bytes(emit_svg_chart(r, title=f"{experiment}: {name}"))
    return csv_path, svg_path


# ---------------------------------------------------------------------------
# perturbation plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlanMove:
    """Displace ``vertices`` by ``magnitude * directions`` (drawing units) from the base."""

    orbit_index: int
    vertices: tuple
    directions: np.ndarray
    magnitude: float
    rule: str = ""


@dataclass(frozen=True, eq=False)
class PerturbationPlan:
    """``steps[i]`` lists the moves made at step ``i + 1``.

    A move replaces the earlier displacement of its vertices; per vertex the
    displacement length must never shrink.
    """

    steps: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(tuple(s) for s in self.steps))
        last = {}
        for i, step in enumerate(self.steps):
            for mv in step:
                dirs = np.asarray(mv.directions, dtype=float).reshape(-1, 2)
                if len(dirs) != len(mv.vertices):
                    raise PlanInvalid(f"step {i + 1}: one direction per vertex required")
                if mv.magnitude < 0 or not math.isfinite(mv.magnitude):
                    raise PlanInvalid(f"step {i + 1}: magnitude must be finite and non-negative")
                for v, z in zip(mv.vertices, dirs):
                    length = mv.magnitude * float(np.hypot(*z))
                    if length < last.get(v, 0.0) - 1e-12:
                        raise PlanInvalid(f"step {i + 1}: displacement of vertex {v} decreases")
                    last[v] = length

    def __len__(self):
        return len(self.steps)

    def positions(self, base, upto: int) -> np.ndarray:
        pos = np.array(base, dtype=float)
        disp = np.zeros_like(pos)
        for step in self.steps[:upto]:
            for mv in step:
                disp[list(mv.vertices)] = mv.magnitude * np.asarray(mv.directions, dtype=float)
        return pos + disp


def apply_plan(d: Drawing, plan: PerturbationPlan, upto: int) -> Drawing:
    return Drawing(d.graph, plan.positions(d.positions, upto), {"step": upto})


def zero_plan(phi, steps=10) -> PerturbationPlan:
    o = phi.orbits[0]
    mv = PlanMove(0, tuple(o), np.zeros((len(o), 2)), 0.0, "none")
    return PerturbationPlan([[mv]] * steps)


def _frame_in_plan_coords(fit, c0, rho):
    fd = fit.frame_in_drawing()
    if fd["type"] == "rotation":
        return RotationFrame((np.array(fd["center"]) - c0) / rho, fit.frame.k, fit.frame.multiplier)
    return AxisFrame(Line((np.array(fd["point"]) - c0) / rho, np.array(fd["direction"])))


def _pattern(o, frame, base_n, rng, tilt_sign=1):
    """Zero-sum unit-scale displacement pattern for one orbit, or None if impossible.

    A mirrored pair is pulled apart along a direction tilted 15-35 degrees off
    the axis; alternating the tilt keeps the broken pairs from agreeing on
    some other common mirror line.
    """
    s = len(o)
    if isinstance(frame, AxisFrame):
        if s != 2:
            return None
        beta = tilt_sign * rng.uniform(np.pi / 12, 7 * np.pi / 36)
        u = frame.axis.direction
        perp = np.array([-u[1], u[0]])
        z = math.cos(beta) * u + math.sin(beta) * perp
        # push the vertex on the far side of the axis foot outward along the axis
        along = (base_n[o[0]] - frame.axis.point) @ u
        if along < 0:
            z = -z
        return np.array([z, -z])
    if s == 2:
        return None  # a centred pair is always a half-turn image of itself
    if s == 3:
        z = rng.standard_normal((3, 2))
        z -= z.mean(axis=0)
        return z / np.hypot(z[:, 0], z[:, 1]).max()
    while True:
        sigma = rng.permutation(s)
        if len(set((sigma - np.arange(s)) % s)) > 1:
            break
    psi = rng.uniform(0, 2 * np.pi)
    ang = psi + 2 * np.pi * sigma / s
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def _max_amplitude(pts, z):
    """Largest ``lam`` with every ``|pts + lam z| <= 1``."""
    best = np.inf
    for p, v in zip(pts, z):
        vv = v @ v
        if vv == 0:
            continue
        pv = p @ v
        lam = (-pv + math.sqrt(pv * pv - vv * (p @ p - 1.0))) / vv
        best = min(best, lam)
    return best


def build_plan(g: Graph, phi, base: Drawing, steps: int = 10, destroy: int | None = None,
               far: float = 6.0, seed=0) -> PerturbationPlan:
    """Plan that destroys ``destroy`` orbits of ``phi`` then pushes them further.

    ``base`` must display ``phi`` exactly.  Rotational orbits of size 2 cannot
    be broken without moving their centroid and are left alone.
    """
    rng = np.random.default_rng(seed)
    fit = approx_sym(g, base, phi)
    if fit.total_distance > 1e-7:
        raise PlanInvalid("base drawing does not display the automorphism exactly")
    P0 = np.asarray(base.positions, dtype=float)
    c0 = P0.mean(axis=0)
    R = float(np.hypot(*(P0 - c0).T).max())
    rho = far * R
    frame = _frame_in_plan_coords(fit, c0, rho)
    base_n = (P0 - c0) / rho
    orbits = phi.orbits
    n_orbits = len(orbits)
    cand = []
    for idx in rng.permutation(n_orbits):
        o = orbits[idx]
        z = _pattern(o, frame, base_n, rng, 1 if len(cand) % 2 == 0 else -1)
        if z is None:
            continue
        pts = base_n[list(o)]
        d1 = fold_orbits(pts + z, [tuple(range(len(o)))], frame)[0].d
        if d1 <= 1e-9:
            continue
        lam_max = _max_amplitude(pts, z)
        cand.append((int(idx), z, d1, lam_max))
    if not cand:
        raise PlanInvalid("no orbit of this automorphism can be perturbed")
    if destroy is None:
        destroy = len(cand) if phi.is_rotational else max(1, min(5, len(cand) - 2))
        destroy = min(destroy, steps)
    destroy = min(destroy, len(cand))
    chosen = cand[:destroy]
    anchor = min(range(destroy), key=lambda i: chosen[i][2] * chosen[i][3])
    chosen.insert(0, chosen.pop(anchor))
    d0 = chosen[0][2] * chosen[0][3]
    first = 2 if (destroy >= 2 and d0 < 1.0 / n_orbits) else 1
    n_destroy_steps = destroy - first + 1
    if steps < n_destroy_steps:
        raise PlanInvalid(f"{steps} steps cannot destroy {destroy} orbits")

    def move(c, d_target, rule):
        idx, z, d1, lam_max = c
        lam = min(d_target / d1, lam_max)
        if c is chosen[0]:
            lam = lam_max
        return PlanMove(idx, tuple(orbits[idx]), z, lam * rho, rule)

    plan_steps = [[move(c, d0, "destroy") for c in chosen[:first]]]
    plan_steps += [[move(c, d0, "destroy")] for c in chosen[first:]]
    extra = steps - len(plan_steps)
    growers = chosen[1:]
    if extra and growers:
        counts = [0] * len(growers)
        order = [i % len(growers) for i in range(extra)]
        for i in order:
            counts[i] += 1
        seen = [0] * len(growers)
        for i in order:
            seen[i] += 1
            c = growers[i]
            d_max = 0.98 * c[2] * c[3]
            target = d0 + (d_max - d0) * seen[i] / counts[i]
            plan_steps.append([move(c, max(target, d0), "further")])
    while len(plan_steps) < steps:
        plan_steps.append([move(chosen[0], d0, "hold")])
    meta = {"rho": rho, "d0": d0, "destroyed": [c[0] for c in chosen], "seed": seed, "orbits": n_orbits}
    return PerturbationPlan(plan_steps, meta)


def symmetric_base(g: Graph, phi) -> Drawing:
    """Concentric (or mirrored) drawing displaying ``phi`` exactly."""
    return layouts.concentric_circles(g, AutomorphismGroup.generate(g, [phi]))


def exp1_perturb(g: Graph, phi, plan: PerturbationPlan, base: Drawing | None = None,
                 eps=None) -> ExperimentResult:
    """Score every step of a perturbation plan (step 0 is the base drawing)."""
    base = symmetric_base(g, phi) if base is None else base
    rows = []
    for i in range(len(plan) + 1):
        d = apply_plan(base, plan, i)
        rep = sq(g, d, phi, eps=eps)
        rows.append(Row(f"step{i}", rep.mean_sd, rep.sq1, rep.sq2))
    meta = {"graph": g.name, "kind": phi.kind, "order": phi.order, "plan": plan.metadata}
    return ExperimentResult(rows, meta)


# ---------------------------------------------------------------------------
# subgroup display (experiment 2)
# ---------------------------------------------------------------------------


def subgroup_display(g: Graph, group: AutomorphismGroup, order: int, angle_amp: float = 0.12,
                     radius_amp: float = 0.12) -> Drawing:
    """Concentric drawing of ``group`` warped to display only rotations of order dividing ``order``.

    With ``beta`` the angle from the mirror axis (the y-axis), each vertex
    moves to angle ``beta + angle_amp * sin(order * beta)`` and radius
    ``r * (1 + radius_amp * cos(order * beta))``.  Both terms have period
    ``2*pi/order`` and are odd/even in ``beta``, so the order-``order``
    dihedral (or cyclic) subgroup survives and every larger rotation breaks.
    """
    base = layouts.concentric_circles(g, group)
    k = group.rotation_order
    if k % order:
        raise ValueError(f"display order {order} does not divide the rotation order {k}")
    if order == k:
        return base
    P = base.positions
    r = np.hypot(P[:, 0], P[:, 1])
    beta = np.arctan2(P[:, 1], P[:, 0]) - np.pi / 2
    b2 = beta + angle_amp * np.sin(order * beta)
    r2 = r * (1.0 + radius_amp * np.cos(order * beta))
    Q = np.stack([r2 * np.cos(b2 + np.pi / 2), r2 * np.sin(b2 + np.pi / 2)], axis=1)
    Q[r == 0] = 0.0
    return Drawing(g, Q, {"display_order": order})


def exp2_group(g: Graph, group: AutomorphismGroup, drawings, eps=None) -> ExperimentResult:
    """SQG for a labelled series of drawings of one graph and group."""
    rows = []
    for label, d in drawings:
        rep = sqg(g, d, group, eps=eps)
        sd = float(np.mean([r.mean_sd for _, r in rep.per_automorphism]))
        rows.append(Row(label, sd, None, None, rep.sqg1, rep.sqg2))
    return ExperimentResult(rows, {"graph": g.name, "group": group.group_kind, "size": group.size})


def displayed_rotation(g: Graph, group: AutomorphismGroup, order: int):
    r = group.rotation_generator()
    return validate_automorphism(g, r.power(r.order // order), kind="rotational")


def perturbed_series(g: Graph, group: AutomorphismGroup, order: int, count: int = 3, seed=0,
                     label=None) -> list:
    """Subgroup-display drawing followed by ``count`` drawings with 1..count orbits destroyed."""
    base = subgroup_display(g, group, order)
    phi = displayed_rotation(g, group, order)
    plan = build_plan(g, phi, base, steps=count, destroy=count, seed=seed)
    label = label or f"C{order}D"
    out = [(f"{label}0", base)]
    for i in range(1, count + 1):
        out.append((f"{label}{i}", apply_plan(base, plan, i)))
    return out


# ---------------------------------------------------------------------------
# layout comparison (experiment 3)
# ---------------------------------------------------------------------------

LAYOUTS = ("concentric", "tutte", "spectral", "fr", "stress", "pivotmds")


def _layout_drawings(e, algorithm, group, seed, fr_runs):
    if algorithm == "fr":
        return [layouts.fr(e.graph, seed=seed + i) for i in range(fr_runs)]
    cfg = layouts.LayoutConfig(algorithm, seed=seed, outer_face=list(e.tutte_outer_face))
    return [layouts.run_layout(e.graph, cfg, group)]


def exp3_layout_comparison(entries=None, algorithms=LAYOUTS, seed=0, fr_runs=5, eps=None) -> dict:
    """Per-graph SQG tables (``{graph: ExperimentResult}``) plus an ``"average"`` table.

    Rows are ``layout:group``; the FR row averages ``fr_runs`` seeded runs.  A
    layout that raises is recorded as a NaN row and listed in the metadata.
    """
    entries = catalog() if entries is None else entries
    tables = {}
    acc = {a: [] for a in algorithms}
    for e in entries:
        rows = []
        failed = []
        for a in algorithms:
            for label, group in e.groups.items():
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore")
                        ds = _layout_drawings(e, a, group, seed, fr_runs)
                    reps = [sqg(e.graph, d, group, eps=eps) for d in ds]
                    s1 = float(np.mean([r.sqg1 for r in reps]))
                    s2 = float(np.mean([r.sqg2 for r in reps]))
                    acc[a].append((s1, s2))
                except SymQualError as exc:
                    s1 = s2 = float("nan")
                    failed.append({"layout": a, "group": label, "error": str(exc)})
                rows.append(Row(f"{a}:{label}", None, None, None, s1, s2))
        tables[e.name] = ExperimentResult(rows, {"graph": e.name, "failed": failed, "seed": seed})
    avg_rows = []
    for a in algorithms:
        vals = np.array(acc[a]) if acc[a] else np.full((1, 2), np.nan)
        avg_rows.append(Row(a, None, None, None, float(vals[:, 0].mean()), float(vals[:, 1].mean())))
    tables["average"] = ExperimentResult(avg_rows, {"graphs": [e.name for e in entries]})
    return tables


# ---------------------------------------------------------------------------
# fixtures and suites
# ---------------------------------------------------------------------------


def rotational_fixtures(seed=0) -> list:
    """(graph, automorphism) pairs used for the rotational perturbation series."""
    out = []
    for name in ("coxeter", "c12x3", "petersen", "dodecahedral"):
        e = entry(name)
        out.append((e.graph, e.group().rotation_generator()))
    for k, m in ((5, 6), (7, 3), (9, 4)):
        g, grp = gen_rotational(k, m, seed=seed + k)
        out.append((g, grp.rotation_generator()))
    return out


def axial_fixtures(seed=0) -> list:
    out = []
    e = entry("heawood")
    out.append((e.graph, e.group().reflections()[0]))
    for pairs, fixed in ((7, 0), (7, 2), (8, 1), (9, 0), (10, 2)):
        g, grp = gen_axial(pairs, fixed, 0.3, seed=seed + 10 * pairs + fixed)
        out.append((g, grp.reflections()[0]))
    return out


def run_exp1(out_dir=None, seed=0, steps=10) -> dict:
    results = {}
    for g, phi in rotational_fixtures(seed) + axial_fixtures(seed):
        base = symmetric_base(g, phi)
        plan = build_plan(g, phi, base, steps=steps, seed=seed)
        res = exp1_perturb(g, phi, plan, base)
        results[g.name] = res
        if out_dir is not None:
            write_result(res, out_dir, "exp1", g.name)
    return results


EXP2_SERIES = {
    "c12x3": ("C12", (12, 6, 4, 3, 2)),
    "dodecahedral": ("D10", (10, 5, 2)),
    "cuboctahedral": ("D6", (6, 3, 2)),
}


def run_exp2(out_dir=None, seed=0) -> dict:
    results = {}
    for name, (label, orders) in EXP2_SERIES.items():
        e = entry(name)
        grp = e.group(label)
        ds = [(f"order{o}", subgroup_display(e.graph, grp, o)) for o in orders]
        results[name] = exp2_group(e.graph, grp, ds)
    e = entry("c12x3")
    grp = e.group("C12")
    for order in (12, 6):
        key = f"c12x3-C{order}D"
        results[key] = exp2_group(e.graph, grp, perturbed_series(e.graph, grp, order, seed=seed, label=f"C{order}D"))
    if out_dir is not None:
        for k, r in results.items():
            write_result(r, out_dir, "exp2", k)
    return results


def run_exp3(out_dir=None, seed=0, fr_runs=5) -> dict:
    results = exp3_layout_comparison(seed=seed, fr_runs=fr_runs)
    if out_dir is not None:
        for k, r in results.items():
            write_result(r, out_dir, "exp3", k)
    return results


def summary_table(results: dict) -> str:
    lines = [f"{'table':<22} {'label':<22} " + " ".join(f"{m:>9}" for m in METRICS)]
    for name, r in results.items():
        for row in r.rows:
            cells = " ".join(("-" if v is None else f"{v:.4f}").rjust(9) for v in row.values())
            lines.append(f"{name:<22} {row.label:<22} {cells}")
    return "\n".join(lines)
