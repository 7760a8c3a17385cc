import csv
import json
import subprocess
import sys

import pytest

from gessel import walk_counting as wc
from gessel.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_text_and_json(capsys):
    code, out, _ = run(capsys, "count", "--n-max", "10")
    assert code == 0 and "8004" in out
    code, out, _ = run(capsys, "count", "--n-max", "10", "--json")
    d = json.loads(out)
    assert d["pass"] and [r["excursions"] for r in d["rows"]] == [1, 2, 11, 85, 782, 8004]


def test_count_csv(capsys, tmp_path):
    path = tmp_path / "walks.csv"
    code, _, _ = run(capsys, "count", "--n-max", "6", "--csv", str(path))
    assert code == 0
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert set(rows[0]) == {"i", "j", "n", "count"}
    table = wc.count_table(wc.GESSEL, 6)
    for r in rows:
        assert int(r["count"]) == table.count(int(r["i"]), int(r["j"]), int(r["n"]))
    assert sum(int(r["count"]) for r in rows if r["n"] == "6") == sum(table.layer(6).ravel())


def test_periods(capsys):
    code, out, _ = run(capsys, "periods", "--z", "0.1", "--json")
    d = json.loads(out)
    assert code == 0
    assert abs(d["ratio"] - 0.75) < 1e-9
    assert len(d["T"]) == 6 and d["omega1_over_i"] > 0


@pytest.mark.parametrize("z", ["0", "0.25", "-1", "abc"])
def test_periods_rejects_z_outside_the_disc(capsys, z):
    code, _, err = run(capsys, "periods", "--z", z)
    assert code == 2 and "z" in err


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--x", "2", "--y", "3")
    d = json.loads(out)
    assert code == 0 and d["orbit_sum"] == "0"
    assert len(d["orbit"]) == 8
    assert sorted(p["sign"] for p in d["orbit"]) == [-1] * 4 + [1] * 4
    code, _, _ = run(capsys, "orbit", "--x", "0", "--y", "3")
    assert code == 2
    code, _, _ = run(capsys, "orbit", "--x", "1/x", "--y", "3")
    assert code == 2


def test_verify_conjecture(capsys):
    code, out, _ = run(capsys, "verify", "conjecture", "--n-max", "12", "--json")
    d = json.loads(out)
    assert code == 0 and all(r["pass"] for r in d)


@pytest.mark.parametrize("what", ["theorem31", "theorem32", "table1"])
def test_verify_numeric_checks(capsys, what):
    code, out, _ = run(capsys, "verify", what, "--z", "0.1", "--json")
    d = json.loads(out)
    assert code == 0
    assert d["check"] == what and d["pass"] is True
    assert d["residual"] <= d["tolerance"]
    assert all({"check_name", "residual", "tolerance", "pass"} <= set(r) for r in d["reports"])


def test_impossible_tolerance_fails_with_exit_one(capsys):
    code, out, _ = run(capsys, "verify", "theorem31", "--z", "0.1", "--tol", "-1")
    assert code == 1 and "FAIL" in out


def test_key_identities(capsys):
    code, out, _ = run(capsys, "verify", "key-identities", "--grid", "8")
    assert code == 0 and out.count("PASS") >= 5


def test_new_conjectures(capsys):
    code, out, _ = run(capsys, "conjectures", "new", "--j", "1", "--order", "10", "--json")
    d = json.loads(out)
    assert code == 0
    assert d["coefficients"][:6] == ["3", "27", "79", "101", "52", "4"]
    assert d["status"] == "conjecture-consistent"
    assert run(capsys, "conjectures", "new", "--j", "-1", "--order", "3")[0] == 2


def test_report_all_quick_json_is_seed_deterministic(capsys):
    def residuals(seed_args):
        code, out, _ = run(capsys, "report-all", "--quick", "--json", *seed_args)
        assert code == 0
        return [[r["residual"] for r in c["reports"] if "runtime" not in r["check_name"]] for c in json.loads(out)]

    a, b = residuals(["--seed", "5"]), residuals(["--seed", "5"])
    assert a == b
    assert len(a) == 13


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("GESSEL_SEED", "5")
    code, out, _ = run(capsys, "report-all", "--quick", "--json")
    env = [[r["residual"] for r in c["reports"] if "runtime" not in r["check_name"]] for c in json.loads(out)]
    monkeypatch.delenv("GESSEL_SEED")
    code, out, _ = run(capsys, "report-all", "--quick", "--json", "--seed", "5")
    flag = [[r["residual"] for r in c["reports"] if "runtime" not in r["check_name"]] for c in json.loads(out)]
    assert env == flag


def test_options_before_the_subcommand(capsys):
    code, out, _ = run(capsys, "--json", "orbit", "--x", "2", "--y", "3")
    assert code == 0 and json.loads(out)["orbit_sum"] == "0"


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "count", "--n-max", "-3")[0] == 2
    assert run(capsys, "verify")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gessel", "orbit", "--x", "1/2", "--y", "5"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["orbit_sum"] == "0"
