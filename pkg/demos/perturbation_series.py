"""Watch both scores fall as a perturbation plan breaks orbits one after another.

Run: python3 demos/perturbation_series.py
"""
from symqual import entry
from symqual.experiments import build_plan, exp1_perturb, symmetric_base

for name, pick in (("coxeter", lambda g: g.rotation_generator()), ("heawood", lambda g: g.reflections()[0])):
    e = entry(name)
    phi = pick(e.group())
    base = symmetric_base(e.graph, phi)
    plan = build_plan(e.graph, phi, base, steps=10, seed=0)
    result = exp1_perturb(e.graph, phi, plan, base)
    print(f"\n{name} ({len(phi.orbits)} orbits, {len(plan.metadata['destroyed'])} get broken)")
    print("step      sd     sq1     sq2")
    for row in result.rows:
        print(f"{row.label:>6} {row.sd:.4f}  {row.sq1:.4f}  {row.sq2:.4f}")
