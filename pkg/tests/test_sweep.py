import csv
import io
import json

import numpy as np
import pytest

from rmoments.criteria import evaluate, margin
from rmoments.errors import InputError
from rmoments.states import GARG_A_MAX, GARG_A_MIN, TOTH_PPT_Q, isotropic, save_state, toth_family
from rmoments.sweep import (
    FamilySpec,
    SweepReport,
    check_state,
    dumps,
    emit_report,
    emit_results,
    find_boundary,
    run_check,
    run_survey,
    run_sweep,
)


def test_family_spec_validation():
    with pytest.raises(InputError):
        FamilySpec("nope", "x")
    with pytest.raises(InputError):
        FamilySpec("isotropic", "q")
    with pytest.raises(InputError):
        FamilySpec("rudolph", "s", 0.3, 0.9, 5)  # t not fixed
    with pytest.raises(InputError):
        FamilySpec("isotropic", "f", 1, 0, 5)
    with pytest.raises(InputError):
        FamilySpec("isotropic", "f", 0, 1, 0)
    spec = FamilySpec("isotropic", "f", 0, 1, 5)
    assert spec.grid().tolist() == [0, 0.25, 0.5, 0.75, 1]


def test_belldiag_free_weights_share_remainder():
    spec = FamilySpec("belldiag", "p1", 0, 1, 3)
    np.testing.assert_allclose(spec.state(0.25).mat, np.eye(4) / 4, atol=1e-15)
    spec = FamilySpec("belldiag", "p1", 0, 1, 3, {"p2": 0.1})
    assert np.trace(spec.state(0.5).mat).real == pytest.approx(1)


def test_check_state_request_order():
    res = check_state(toth_family(TOTH_PPT_Q), "r1,zhang,ppt")
    assert [r.id for r in res] == ["r1", "zhang", "ppt"]
    assert [r.detects for r in res] == [True, False, False]


def test_run_check_examples(tmp_path):
    path = tmp_path / "s.json"
    save_state(isotropic(1.0), path)
    res = run_check(path, "all")
    assert all(r.detects for r in res)
    save_state(isotropic(0.25), path)
    assert not any(r.detects for r in run_check(path, "all"))


def test_sweep_rows_and_flips():
    spec = FamilySpec("isotropic", "f", 0, 1, 101)
    rep = run_sweep(spec, "ppt")
    assert len(rep.rows) == 101
    assert [r[0] for r in rep.rows] == sorted(r[0] for r in rep.rows)
    assert len(rep.boundaries["ppt"]) == 1
    assert rep.boundaries["ppt"][0] == pytest.approx(0.5, abs=0.01)


def test_toth_d3_sweep_flip():
    rep = run_sweep(FamilySpec("toth", "q", 0, 0.5, 501), "d3")
    assert rep.boundaries["d3"] and rep.boundaries["d3"][-1] == pytest.approx(0.425035, abs=1e-3)


def test_garg_sweep_verdicts():
    rep = run_sweep(FamilySpec("garg", "a", GARG_A_MIN, GARG_A_MAX, 100), "r1")
    assert all(d for _, c, _, d in rep.rows if c == "r1")
    assert rep.boundaries["r1"] == []


def test_parallel_sweep_is_byte_identical():
    spec = FamilySpec("rudolph", "t", -0.3, 0.3, 25, {"s": 0.6})
    serial = run_sweep(spec, "all")
    parallel = run_sweep(spec, "all", workers=4)
    for fmt in ("csv", "json", "table"):
        assert emit_report(serial, fmt) == emit_report(parallel, fmt)


def test_emit_report_csv():
    empty = SweepReport(FamilySpec("isotropic", "f", 0, 1, 3), [], [], {})
    assert emit_report(empty, "csv") == "param,criterion,value,detects\n"
    rep = run_sweep(FamilySpec("isotropic", "f", 0, 1, 3), "ppt,ccnr")
    rows = list(csv.reader(io.StringIO(emit_report(rep, "csv"))))
    assert rows[0] == ["param", "criterion", "value", "detects"]
    assert len(rows) == 7
    assert rows[-1][:2] == ["1", "ccnr"] and rows[-1][3] == "true"
    # ten significant digits
    assert float(rows[-1][2]) == pytest.approx(1.0)
    with pytest.raises(InputError):
        emit_report(rep, "xml")


def test_emit_report_json_round_trips_values():
    rep = run_sweep(FamilySpec("isotropic", "f", 0, 1, 7), "r2")
    data = json.loads(emit_report(rep, "json"))
    assert data["criteria"] == ["r2"]
    assert [row["value"] for row in data["rows"]] == [r[2] for r in rep.rows]
    assert data["boundaries"]["r2"] == rep.boundaries["r2"]


def test_dumps_seventeen_digits():
    assert dumps(0.1) == "1.0000000000000001e-01"
    assert json.loads(dumps({"a": [1, 2.5, True, None]})) == {"a": [1, 2.5, True, None]}
    assert dumps(1 / 3, digits=10) == "0.3333333333"


def test_emit_results_formats():
    res = check_state(isotropic(1.0), "ppt,ccnr")
    data = json.loads(emit_results(res, "json"))
    assert [d["criterion"] for d in data] == ["ppt", "ccnr"]
    assert emit_results(res, "csv").splitlines()[0] == "criterion,value,detects"
    assert "ppt" in emit_results(res, "table")


def test_find_boundary_examples():
    iso = FamilySpec("isotropic", "f", steps=1)
    assert find_boundary(iso, "r2", 0.5, 0.7) == pytest.approx(0.608594, abs=1e-4)
    assert find_boundary(iso, "ppt", 0.3, 0.7) == pytest.approx(0.5, abs=1e-6)
    toth = FamilySpec("toth", "q", steps=1)
    assert find_boundary(toth, "r1", 0.2, 0.35) == pytest.approx(0.26477, abs=1e-3)
    assert find_boundary(toth, "r1", 0.001, 0.05) == pytest.approx(0.00659601, abs=1e-3)


def test_find_boundary_contract():
    spec = FamilySpec("isotropic", "f", steps=1)
    tol = 1e-6
    b = find_boundary(spec, "d3", 0.5, 0.8, tol)

    def detects(x):
        return margin("d3", evaluate("d3", isotropic(x)).value) > 0

    assert detects(b - tol) != detects(b + tol)
    with pytest.raises(InputError):
        find_boundary(spec, "d3", 0.0, 0.3)
    with pytest.raises(InputError):
        find_boundary(spec, "d3", 0.8, 0.5)


def test_survey_determinism():
    a = run_survey((2, 2), 200, 4, 7, "all")
    b = run_survey((2, 2), 200, 4, 7, "all", workers=4)
    assert dumps(a) == dumps(b)
    c = run_survey((2, 2), 200, 4, 8, "all")
    assert a["counts"] != c["counts"] or a["seed"] != c["seed"]
    with pytest.raises(InputError):
        run_survey((2, 2), 10, 4, None)


def test_survey_separable_counts_zero():
    rep = run_survey((2, 2), 1000, 3, 11, "all", sampler="separable")
    assert all(v == 0 for v in rep["counts"].values())


def test_survey_r1_within_ccnr():
    rep = run_survey((3, 3), 1000, 2, 5, "r1,ccnr,d3")
    assert rep["counts"]["r1"] <= rep["counts"]["ccnr"]
    assert rep["cross"]["r1&!ccnr"] == 0
    assert "r1&!d3" in rep["cross"]
