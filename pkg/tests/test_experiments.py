import hashlib

import numpy as np
import pytest

from symqual.catalog import entry
from symqual.errors import PlanInvalid
from symqual.experiments import (
    ExperimentResult,
    PerturbationPlan,
    PlanMove,
    Row,
    apply_plan,
    axial_fixtures,
    build_plan,
    emit_csv,
    emit_svg_chart,
    exp1_perturb,
    exp2_group,
    exp3_layout_comparison,
    perturbed_series,
    rotational_fixtures,
    run_exp1,
    run_exp2,
    subgroup_display,
    summary_table,
    symmetric_base,
    write_result,
    zero_plan,
)
from symqual.metrics import sq


def series(g, phi, seed=0, steps=10, destroy=None):
    base = symmetric_base(g, phi)
    plan = build_plan(g, phi, base, steps=steps, destroy=destroy, seed=seed)
    return plan, exp1_perturb(g, phi, plan, base)


# -- plans --------------------------------------------------------------------


def test_shrinking_displacement_is_rejected():
    z = np.ones((1, 2))
    with pytest.raises(PlanInvalid):
        PerturbationPlan([[PlanMove(0, (0,), z, 0.5)], [PlanMove(0, (0,), z, 0.2)]])
    with pytest.raises(PlanInvalid):
        PerturbationPlan([[PlanMove(0, (0, 1), z, 0.5)]])


def test_zero_plan_keeps_scores_at_one():
    e = entry("coxeter")
    phi = e.group().rotation_generator()
    res = exp1_perturb(e.graph, phi, zero_plan(phi))
    assert len(res.rows) == 11
    assert all(r.sq1 == 1.0 and r.sq2 == 1.0 and r.sd == pytest.approx(1.0) for r in res.rows)


def test_plan_requires_symmetric_base():
    e = entry("petersen")
    phi = e.group().rotation_generator()
    base = symmetric_base(e.graph, phi)
    P = base.positions.copy()
    P[0] += 0.3
    with pytest.raises(PlanInvalid):
        build_plan(e.graph, phi, base.with_positions(P))


def test_plan_keeps_normalization_scale_fixed():
    e = entry("coxeter")
    phi = e.group().rotation_generator()
    base = symmetric_base(e.graph, phi)
    plan = build_plan(e.graph, phi, base, seed=1)
    radii = []
    for i in range(1, len(plan) + 1):
        P = apply_plan(base, plan, i).positions
        radii.append(np.hypot(*(P - P.mean(axis=0)).T).max())
    assert np.allclose(radii, radii[0], rtol=1e-9)


# -- experiment 1 -------------------------------------------------------------


def test_coxeter_series_bounds():
    e = entry("coxeter")
    plan, res = series(e.graph, e.group().rotation_generator())
    assert len(res.rows) == 11
    sq1, sq2, sd = res.column("sq1"), res.column("sq2"), res.column("sd")
    assert np.all(np.diff(sq1) <= 1e-9) and np.all(np.diff(sq2) <= 1e-9)
    assert 0.2 <= sq1[-1] <= 0.4
    assert sq2[-1] < 0.1
    assert 0.5 <= sd[-1] <= 0.7


def test_heawood_series_bounds():
    e = entry("heawood")
    plan, res = series(e.graph, e.group().reflections()[0])
    assert len(plan.metadata["destroyed"]) == 5
    sq1, sq2 = res.column("sq1"), res.column("sq2")
    assert all(b < a for a, b in zip(sq1[5:], sq2[5:]))
    assert sq2[-1] < 0.1


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_scores_fall_and_stay_ordered_on_all_fixtures(seed):
    for g, phi in rotational_fixtures(seed) + axial_fixtures(seed):
        plan, res = series(g, phi, seed=seed)
        sq1, sq2, sd = (np.array(res.column(m)) for m in ("sq1", "sq2", "sd"))
        assert np.all(np.diff(sq1) <= 1e-9), g.name
        assert np.all(np.diff(sq2) <= 1e-9), g.name
        for i in range(1, len(sq1)):
            assert sq2[i] <= sq1[i] + 1e-12 <= sd[i] + 2e-12, (g.name, i)


def test_exp1_is_deterministic():
    a = run_exp1(seed=4, steps=4)
    b = run_exp1(seed=4, steps=4)
    assert [emit_csv(r) for r in a.values()] == [emit_csv(r) for r in b.values()]


# -- experiment 2 -------------------------------------------------------------


def test_subgroup_display_keeps_only_requested_order():
    e = entry("c12x3")
    grp = e.group("C12")
    d = subgroup_display(e.graph, grp, 4)
    for phi in grp:
        exact = sq(e.graph, d, phi).sq1 == 1.0
        assert exact == (12 // phi.order in (3, 6, 9) or phi.order in (2, 4))


def test_subgroup_display_rejects_non_divisor():
    e = entry("c12x3")
    with pytest.raises(ValueError):
        subgroup_display(e.graph, e.group("C12"), 5)


def test_exp2_series_and_perturbed_series():
    res = run_exp2(seed=0)
    for name in ("c12x3", "dodecahedral", "cuboctahedral"):
        s = res[name].column("sqg1")
        assert all(a - b >= 1e-6 for a, b in zip(s, s[1:])), name
    for name in ("dodecahedral", "cuboctahedral"):
        assert min(res[name].column("sqg1")) > 0.5
    for key in ("c12x3-C12D", "c12x3-C6D"):
        s = res[key].column("sqg1")
        assert all(b <= a + 1e-12 for a, b in zip(s, s[1:]))


def test_perturbed_series_labels():
    e = entry("c12x3")
    out = perturbed_series(e.graph, e.group("C12"), 6, count=3)
    assert [lab for lab, _ in out] == ["C6D0", "C6D1", "C6D2", "C6D3"]


# -- experiment 3 -------------------------------------------------------------


def test_layout_comparison_subset():
    tables = exp3_layout_comparison([entry("petersen")], algorithms=("concentric", "tutte", "spectral"),
                                    fr_runs=1)
    rows = {r.label: r for r in tables["petersen"].rows}
    assert rows["concentric:D5"].sqg1 == pytest.approx(1, abs=1e-9)
    assert rows["tutte:D5"].sqg1 == pytest.approx(1, abs=1e-9)
    assert [r.label for r in tables["average"].rows] == ["concentric", "tutte", "spectral"]


def test_layout_failures_are_recorded():
    # the tesseract is not planar, but its listed 4-cycle still gives a solvable system;
    # force a failure with an invalid face instead
    e = entry("petersen")
    bad = type(e)(e.graph, e.groups, (0, 2, 4), e.provenance)
    tables = exp3_layout_comparison([bad], algorithms=("tutte",), fr_runs=1)
    assert np.isnan(tables["petersen"].rows[0].sqg1)
    assert tables["petersen"].metadata["failed"][0]["layout"] == "tutte"


# -- output -------------------------------------------------------------------


def test_one_row_csv():
    r = ExperimentResult([Row("a", 0.5, 0.25, 0.125)])
    text = emit_csv(r).decode()
    assert text == "label,sd,sq1,sq2,sqg1,sqg2\na,0.5,0.25,0.125,,\n"


def test_svg_is_byte_identical():
    e = entry("petersen")
    plan, res = series(e.graph, e.group().rotation_generator(), steps=4)
    h1 = hashlib.sha256(emit_svg_chart(res, "x")).hexdigest()
    plan, res2 = series(e.graph, e.group().rotation_generator(), steps=4)
    assert h1 == hashlib.sha256(emit_svg_chart(res2, "x")).hexdigest()
    assert emit_svg_chart(res).startswith(b"<svg")


def test_write_result_paths(tmp_path):
    r = ExperimentResult([Row("a", 1.0, 1.0, 1.0), Row("b", 0.9, 0.6, 0.4)])
    csv, svg = write_result(r, tmp_path, "exp1", "demo")
    assert csv == tmp_path / "exp1" / "demo.csv" and svg.exists()
    assert csv.read_bytes() == emit_csv(r)


def test_empty_result_rejected():
    with pytest.raises(ValueError):
        emit_csv(ExperimentResult([]))


def test_summary_table_layout():
    r = ExperimentResult([Row("step0", 1.0, 1.0, 1.0)])
    lines = summary_table({"g": r}).splitlines()
    assert lines[0].split() == ["table", "label", "sd", "sq1", "sq2", "sqg1", "sqg2"]
    assert lines[1].split() == ["g", "step0", "1.0000", "1.0000", "1.0000", "-", "-"]
