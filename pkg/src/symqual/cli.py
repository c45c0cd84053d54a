"""Command-line interface: ``symqual <subcommand> ...``.

Exit status is 0 on success, 1 when an input fails validation (including
graph mismatches and unreadable files) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import experiments, io, layouts
from .catalog import catalog, entry
from .detect import EXACT_TOL, detect_exact
from .errors import SymQualError
from .generators import gen_axial, gen_rotational
from .geometry import Line
from .metrics import sq, sqg

DIGITS = 9
EXPERIMENTS = ("exp1", "exp2", "exp3")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SymQualError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _emit(obj, args):
    text = io.dumps(obj, indent=2, digits=DIGITS) + "\n"
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_gd(args):
    g = io.load_graph(_read(args.graph))
    d = io.load_drawing(_read(args.drawing), g)
    return g, d


def _formula(report: dict, formula: str, keys) -> dict:
    if formula == "both":
        return report
    drop = keys[1] if formula.endswith("1") else keys[0]
    return {k: v for k, v in report.items() if k != drop and k != f"{drop}_unclamped"}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_sq(args):
    g, d = _load_gd(args)
    phi = io.load_automorphism(_read(args.automorphism), g)
    frame = None
    if args.center is not None:
        frame = tuple(args.center)
    elif args.axis is not None:
        px, py, dx, dy = args.axis
        frame = Line((px, py), (dx, dy))
    rep = sq(g, d, phi, eps=args.eps, center_or_axis=frame, method=args.method)
    _emit(_formula(rep.to_dict(), args.formula, ("sq1", "sq2")), args)


def cmd_sqg(args):
    g, d = _load_gd(args)
    grp = io.load_group(_read(args.group), g)
    rep = sqg(g, d, grp, eps=args.eps, method=args.method)
    out = rep.to_dict()
    if args.formula != "both":
        drop = "sqg2" if args.formula == "sq1" else "sqg1"
        out.pop(drop)
        for el in out["elements"]:
            el.pop("sq2" if args.formula == "sq1" else "sq1")
    _emit(out, args)


def _symmetry_dict(s):
    out = {"kind": s.kind, "permutation": list(s.permutation)}
    if s.kind == "rotation":
        out["order"] = s.order
        out["center"] = [float(x) for x in s.center]
    else:
        out["axis"] = {"point": [float(x) for x in s.axis.point],
                       "direction": [float(x) for x in s.axis.direction]}
    return out


def cmd_detect(args):
    g, d = _load_gd(args)
    res = detect_exact(g, d, tol=args.tol)
    if not res.found:
        if args.output:
            _emit("none", args)
        else:
            print("none")
        return
    out = {
        "rotation": _symmetry_dict(res.rotation) if res.rotation is not None else None,
        "reflections": [_symmetry_dict(s) for s in res.reflections],
        "point_rotation_order": res.point_rotation_order,
    }
    _emit(out, args)


def cmd_layout(args):
    g = io.load_graph(_read(args.graph))
    grp = io.load_group(_read(args.group), g) if args.group else None
    cfg = layouts.LayoutConfig(
        args.algo,
        seed=args.seed,
        iterations=args.iterations,
        tolerance=args.tolerance,
        outer_face=args.outer_face,
        pivot_count=args.pivots,
        orbit_radius_step=args.step,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        d = layouts.run_layout(g, cfg, grp)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(d, args)


def cmd_generate(args):
    if args.family == "c":
        g, grp = gen_rotational(args.k, args.m, seed=args.seed)
    elif args.family == "axial":
        g, grp = gen_axial(args.orbits, args.fixed, args.density, seed=args.seed)
    else:
        if args.name is None:
            names = ", ".join(e.name for e in catalog())
            raise SymQualError(f"--name is required for the catalog family; choose from {names}")
        try:
            e = entry(args.name)
        except KeyError as exc:
            raise SymQualError(exc.args[0]) from exc
        g, grp = e.graph, e.group(args.group_label)
    _emit({"graph": io.graph_to_dict(g), "group": io.group_to_dict(grp)}, args)


def cmd_perturb(args):
    g, d = _load_gd(args)
    phi = io.load_automorphism(_read(args.automorphism), g)
    if not 0 <= args.step <= args.steps:
        raise SymQualError(f"--step must lie in [0, {args.steps}]")
    plan = experiments.build_plan(g, phi, d, steps=args.steps, destroy=args.destroy,
                                  far=args.far, seed=args.seed)
    _emit(experiments.apply_plan(d, plan, args.step), args)


def cmd_experiment(args):
    out = Path(args.out)
    if args.name == "exp1":
        res = experiments.run_exp1(out, seed=args.seed, steps=args.steps)
    elif args.name == "exp2":
        res = experiments.run_exp2(out, seed=args.seed)
    else:
        res = experiments.run_exp3(out, seed=args.seed, fr_runs=args.fr_runs)
    print(experiments.summary_table(res))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common_inputs(p, automorphism=False, group=False):
    p.add_argument("--graph", required=True, metavar="PATH", help="graph JSON file")
    p.add_argument("--drawing", required=True, metavar="PATH", help="drawing JSON file")
    if automorphism:
        p.add_argument("--automorphism", required=True, metavar="PATH", help="automorphism JSON file")
    if group:
        p.add_argument("--group", required=True, metavar="PATH", help="automorphism group JSON file")


def _output(p):
    p.add_argument("--output", "-o", metavar="PATH", help="write JSON here instead of standard output")


def _scoring(p):
    p.add_argument("--eps", type=float, default=None,
                   help="symmetric-orbit threshold on 1 - sd (default: $SYMQUAL_EPS or 1e-4)")
    p.add_argument("--formula", choices=("sq1", "sq2", "both"), default="both", help="which score(s) to report")
    p.add_argument("--method", choices=("median", "mean"), default="median",
                   help="how folded orbit points are merged")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symqual", description="Symmetry quality of graph drawings.")
    sub = parser.add_subparsers(dest="command", metavar="<command>", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("sq", help="score one automorphism", description="Score how well a drawing displays one automorphism.")
    _common_inputs(p, automorphism=True)
    _scoring(p)
    frame = p.add_mutually_exclusive_group()
    frame.add_argument("--center", nargs=2, type=float, metavar=("X", "Y"), help="fix the rotation centre")
    frame.add_argument("--axis", nargs=4, type=float, metavar=("PX", "PY", "DX", "DY"),
                       help="fix the mirror axis by a point and a direction")
    _output(p)
    p.set_defaults(func=cmd_sq)

    p = sub.add_parser("sqg", help="score an automorphism group", description="Score how well a drawing displays a group.")
    _common_inputs(p, group=True)
    _scoring(p)
    _output(p)
    p.set_defaults(func=cmd_sqg)

    p = sub.add_parser("detect", help="find exact symmetries",
                       description="Report rotations and reflections of the drawing that are automorphisms, or 'none'.")
    _common_inputs(p)
    p.add_argument("--tol", type=float, default=EXACT_TOL, help="angle/radius tolerance for the point-set search")
    _output(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("layout", help="compute a drawing", description="Compute a drawing with one of the layout algorithms.")
    p.add_argument("--graph", required=True, metavar="PATH", help="graph JSON file")
    p.add_argument("--algo", required=True, choices=layouts.ALGORITHMS, help="layout algorithm")
    p.add_argument("--group", metavar="PATH", help="automorphism group JSON (concentric layout)")
    p.add_argument("--outer-face", nargs="+", type=int, metavar="V", help="outer face cycle (tutte layout)")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--iterations", type=int, default=None, help="iteration budget")
    p.add_argument("--tolerance", type=float, default=None, help="convergence tolerance")
    p.add_argument("--pivots", type=int, default=50, help="pivot count (pivotmds)")
    p.add_argument("--step", type=float, default=1.0, help="radius step between orbit circles (concentric)")
    _output(p)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("generate", help="emit a symmetric graph and its group",
                       description="Emit a graph together with an automorphism group as JSON.")
    p.add_argument("--family", required=True, choices=("c", "axial", "catalog"),
                   help="c: concentric k-cycles; axial: random mirrored graph; catalog: named graph")
    p.add_argument("--k", type=int, default=12, help="rotation order (family c)")
    p.add_argument("--m", type=int, default=3, help="number of rings (family c)")
    p.add_argument("--orbits", type=int, default=7, help="mirrored vertex pairs (family axial)")
    p.add_argument("--fixed", type=int, default=0, help="vertices on the mirror (family axial)")
    p.add_argument("--density", type=float, default=0.3, help="edge probability (family axial)")
    p.add_argument("--name", help="catalog graph name (family catalog)")
    p.add_argument("--group-label", default=None, help="catalog group label, e.g. D5 (default: largest)")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    _output(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("perturb", help="apply a perturbation plan step",
                       description="Build a seeded perturbation plan for an automorphism and emit the drawing after one step.")
    _common_inputs(p, automorphism=True)
    p.add_argument("--steps", type=int, default=10, help="plan length")
    p.add_argument("--step", type=int, required=True, help="step to emit (0 is the input drawing)")
    p.add_argument("--destroy", type=int, default=None, help="number of orbits to destroy")
    p.add_argument("--far", type=float, default=6.0, help="radius multiple for the anchor vertex")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    _output(p)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("experiment", help="run an experiment suite",
                       description="Run an experiment suite, write CSV/SVG per table and print a summary.")
    p.add_argument("name", choices=EXPERIMENTS, help="which suite")
    p.add_argument("--out", default="results", metavar="DIR", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="top-level random seed")
    p.add_argument("--steps", type=int, default=10, help="perturbation steps (exp1)")
    p.add_argument("--fr-runs", type=int, default=5, help="force-directed runs per graph (exp3)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        args.func(args)
    except (SymQualError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
