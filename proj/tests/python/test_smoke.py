import pytest

import cbmspares


@pytest.fixture(scope="module")
def model():
    return cbmspares.params(seed=1)


def test_generate_is_seeded():
    a = cbmspares.generate(4)
    assert a == cbmspares.generate(4)
    assert len(a["warehouses"]) == 2 and len(a["machines"]) == 2


def test_validate_default_instance(model):
    report = cbmspares.validate(model)
    assert report["states"] == 270
    assert all(c["passed"] for c in report["checks"])


def test_class_values_are_ordered(model):
    V = {c: [s["V"] for s in cbmspares.solve(model, c)["states"]] for c in cbmspares.POLICY_CLASSES}
    for lo, hi in [("ocpr", "ocr"), ("ocr", "oc"), ("ocpr", "ocp"), ("ocp", "oc"), ("oc", "cf")]:
        assert all(a <= b + 1e-8 for a, b in zip(V[lo], V[hi]))


def test_simulation_brackets_solver_value(model):
    sol = cbmspares.solve(model, "oc")
    est = cbmspares.simulate(sol, replications=4000, seed=3)
    assert est["solver_value_inside"]


def test_table_rows_and_summary():
    rows, cells = cbmspares.table1(instances=2, cost_settings=[1], rho=[1.0])
    assert len(rows) == 2 * 5
    assert {r["policy"] for r in cells} == {"CF", "OC", "OCR", "OCP", "OCPR"}


def test_sweep_grid():
    pts = cbmspares.sweep(grid=3)
    assert len(pts) == 9
    assert pts[-1]["c_ps"] == "1.5" and pts[-1]["c_rs"] == "1.5"


def test_bad_policy_raises(model):
    with pytest.raises(ValueError):
        cbmspares.solve(model, "best")
