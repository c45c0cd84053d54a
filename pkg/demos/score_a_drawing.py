"""Score a symmetric drawing of the Coxeter graph, then nudge one vertex and score it again.

Run: python3 demos/score_a_drawing.py
"""
import numpy as np

from symqual import concentric_circles, detect_exact, entry, sq

e = entry("coxeter")
group = e.group("C7")
phi = group.rotation_generator()

drawing = concentric_circles(e.graph, group)
found = detect_exact(e.graph, drawing)
print(f"{e.graph.name}: {e.graph.n} vertices, exact rotation of order {found.rotation.order}")

report = sq(e.graph, drawing, phi)
print(f"concentric drawing   sq1={report.sq1:.4f} sq2={report.sq2:.4f}")

# Push one vertex outward. Only its orbit stops being symmetric. That orbit is
# still close to symmetric, and sq2 credits it with one orbit's worth of bonus,
# so here sq2 ends up above sq1.
P = drawing.positions.copy()
P[0] *= 1.4
bent = drawing.with_positions(P)
report = sq(e.graph, bent, phi)
print(f"one vertex moved     sq1={report.sq1:.4f} sq2={report.sq2:.4f}")
for orbit in report.per_orbit:
    print(f"  orbit {orbit.orbit[:3]}... sd={orbit.sd:.4f} symmetric={orbit.symmetric}")

# Random noise on every vertex breaks all four orbits.
rng = np.random.default_rng(1)
noisy = drawing.with_positions(drawing.positions + rng.normal(scale=0.05, size=P.shape))
report = sq(e.graph, noisy, phi)
print(f"noise on every vertex sq1={report.sq1:.4f} sq2={report.sq2:.4f}")
