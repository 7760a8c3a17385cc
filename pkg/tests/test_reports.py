import json
import math

from gessel.reports import CriterionResult, exact, numeric, timed, to_json


def test_numeric_report_pass_and_fail():
    assert numeric("a", 1e-10, 1e-9).passed
    assert not numeric("a", 1e-8, 1e-9).passed
    assert not numeric("a", math.nan, 1e-9).passed
    assert not numeric("a", math.inf, 1e-9).passed


def test_exact_report():
    rep = exact("b", True, details={"k": 1}, n=3)
    assert rep.passed and rep.residual == "exact"
    assert rep.parameters == {"n": 3}
    assert "PASS" in rep.line() and "n=3" in rep.line()
    assert exact("b", False).line().startswith("FAIL")


def test_report_json_schema():
    rep = numeric("c", 2e-12, 1e-9, 5, z=0.1)
    d = json.loads(to_json(rep))
    assert set(d) == {"check_name", "parameters", "residual", "tolerance", "pass", "runtime_ms", "details"}
    assert d["pass"] is True and d["parameters"] == {"z": 0.1} and d["runtime_ms"] == 5


def test_json_handles_complex_numpy_and_nonfinite():
    import numpy as np

    rep = exact("d", True, details={"w": 1 + 2j, "r": 3.0 + 0j, "n": np.int64(4), "x": math.inf})
    d = json.loads(to_json(rep))["details"]
    assert d == {"w": {"re": 1.0, "im": 2.0}, "r": 3.0, "n": 4, "x": "inf"}


def test_criterion_result():
    ok = CriterionResult(1, "title", [numeric("a", 0, 1), exact("b", True)])
    bad = CriterionResult(2, "title", [numeric("a", 0, 1), exact("b", False)])
    assert ok.passed and not bad.passed
    assert "PASS" in ok.summary() and "FAIL" in bad.summary() and "b" in bad.summary()
    d = json.loads(to_json([ok, bad]))
    assert [c["pass"] for c in d] == [True, False]
    assert len(d[0]["reports"]) == 2


def test_timer():
    with timed() as t:
        sum(range(1000))
    assert t.ms >= 0
