"""Compare how much of the Petersen graph's dihedral symmetry each layout algorithm shows.

Run: python3 demos/compare_layouts.py
"""
import warnings

from symqual import ConvergenceFailure, LayoutConfig, entry, run_layout, sqg

e = entry("petersen")
group = e.group("D5")
print(f"{e.graph.name} against its order-5 dihedral group\n")
print("layout        sqg1    sqg2")
for algo in ("concentric", "tutte", "spectral", "stress", "pivotmds", "fr"):
    cfg = LayoutConfig(algo, seed=0, outer_face=list(e.tutte_outer_face))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceFailure)
        drawing = run_layout(e.graph, cfg, group)
    rep = sqg(e.graph, drawing, group)
    print(f"{algo:<12} {rep.sqg1:.4f}  {rep.sqg2:.4f}")
