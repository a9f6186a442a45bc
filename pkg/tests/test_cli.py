import csv
import io
import itertools
import json
from pathlib import Path

import numpy as np
import pytest

from ffincidence import cli, spectrum
from ffincidence.report import render_json, strip_timing, to_jsonable

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_COMMANDS = {
    "spectrum_p3_l1_k4_cone.json": ["spectrum", "--p", "3", "--ell", "1", "--k", "4", "--form", "cone"],
    "sumprod_p19_d3_a5_t20_s7.json": ["sumprod", "--p", "19", "--ell", "1", "--d", "3", "--sizeA", "5",
                                      "--trials", "20", "--seed", "7"],
}


def run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    return code, json.loads(out) if out else None, err


@pytest.mark.parametrize("name", sorted(GOLDEN_COMMANDS))
@pytest.mark.parametrize("workers", ["1", "4"])
def test_golden_reports(name, workers, capsys):
    code, rep, _ = run_json(GOLDEN_COMMANDS[name] + ["--workers", workers], capsys)
    assert code == 0
    assert render_json(strip_timing(rep)) == (GOLDEN / name).read_text()


def test_sumprod_golden_against_direct_enumeration():
    rep = json.loads((GOLDEN / "sumprod_p19_d3_a5_t20_s7.json").read_text())
    squares = {(x * x) % 19 for x in range(1, 19)}
    for row in rep["results"]:
        A = sorted(int(a) for a in np.random.default_rng(row["seed"]).permutation(19)[:5])
        assert row["A"] == A
        sums = [sum(x * x for x in t) % 19 for t in itertools.product(A, repeat=3)]
        assert row["square_tuples"] == sum(s in squares for s in sums)
        assert row["zero_tuples"] == sums.count(0)
        assert row["size_sumset"] == len({(a + b) % 19 for a in A for b in A})
        assert row["size_dA2"] == len(set(sums))
        pair = [sum(x * x for x in t) % 19 for t in itertools.product(A, repeat=2)]
        assert row["energy"] == sum(pair.count(v) ** 2 for v in set(pair))


def test_spectrum_examples(capsys):
    code, rep, _ = run_json(["spectrum", "--p", "3", "--ell", "1", "--k", "4", "--form", "cone"], capsys)
    assert code == 0 and rep["mismatches"] == []
    code, rep, _ = run_json(["spectrum", "--p", "3", "--ell", "1", "--k", "5", "--form", "cone"], capsys)
    assert code == 0 and rep["results"][0]["case"] == "cone-odd"


def test_report_schema(capsys):
    _, rep, _ = run_json(["gauss", "--p", "7"], capsys)
    assert list(rep) == ["command", "params", "results", "mismatches", "assertions", "elapsed_ms", "seed", "version"]
    for a in rep["assertions"]:
        assert set(a) >= {"name", "lhs", "rhs", "pass"}


def test_gauss_nonprime_exits_2(capsys):
    code, out, err = run(["gauss", "--p", "9", "--ell", "1"], capsys)
    assert code == 2 and out == "" and "NonPrime" in err


@pytest.mark.parametrize("argv", [
    [],
    ["spectrum", "--p", "3", "--k", "4"],
    ["spectrum", "--p", "3", "--k", "4", "--form", "ellipse"],
    ["mixing", "--p", "3", "--k", "4", "--form", "cone", "--trials", "-1", "--size", "3"],
    ["frobnicate"],
    ["spectrum", "--p", "3", "--k", "1", "--form", "cone"],
    ["mixing", "--p", "5", "--k", "4", "--form", "cone", "--trials", "1", "--size", "3"],
    ["spectrum", "--p", "11", "--k", "4", "--form", "cone", "--budget", "1000"],
    ["sumprod", "--p", "13", "--d", "2", "--sizeA", "3", "--trials", "1"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_unwritable_output_exits_2(tmp_path, capsys):
    target = tmp_path / "missing" / "r.json"
    assert run(["gauss", "--p", "3", "--out", str(target)], capsys)[0] == 2


def test_empty_mixing_suite(capsys):
    code, rep, _ = run_json(["mixing", "--p", "3", "--k", "4", "--form", "cone", "--trials", "0", "--size", "5"], capsys)
    assert code == 0 and rep["results"] == []


def test_csv_rows(capsys):
    code, out, _ = run(["sumprod", "--p", "19", "--d", "3", "--sizeA", "5", "--trials", "3", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert rows[0][:2] == ["seed", "A"]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "g.json"
    assert run(["gauss", "--p", "5", "--out", str(target)], capsys)[0] == 0
    assert json.loads(target.read_text())["command"] == "gauss"


def test_forced_failure_exits_1(monkeypatch, capsys):
    real = spectrum.formula_array

    def wrong(form, ctx, k, M):
        vals = real(form, ctx, k, M).copy()
        vals[-1] += 1
        return vals

    monkeypatch.setattr(spectrum, "formula_array", wrong)
    code, rep, _ = run_json(["spectrum", "--p", "3", "--k", "4", "--form", "cone"], capsys)
    assert code == 1
    assert rep["mismatches"][0]["m"] == [2, 2, 2, 2]


def test_failed_bound_exits_1(monkeypatch, capsys):
    from ffincidence import incidence

    monkeypatch.setattr(incidence, "_le_sqrt", lambda a, c, s: False)
    code, rep, _ = run_json(["distance", "--p", "7", "--d", "3", "--size", "20", "--trials", "2"], capsys)
    assert code == 1 and not any(a["pass"] for a in rep["assertions"])


@pytest.mark.parametrize("argv", [
    ["mixing", "--p", "7", "--k", "4", "--form", "cone", "--trials", "8", "--size", "60", "--seed", "3"],
    ["incidence", "--p", "11", "--d", "3", "--radius-class", "nonsquare", "--np", "50", "--ns", "50", "--trials", "4"],
    ["distance", "--p", "7", "--d", "3", "--size", "40", "--trials", "5", "--seed", "9"],
    ["spectrum", "--p", "7", "--k", "3", "--form", "norm"],
])
def test_worker_count_does_not_change_output(argv, capsys):
    _, one, _ = run_json(argv + ["--workers", "1"], capsys)
    _, many, _ = run_json(argv + ["--workers", "4"], capsys)
    assert render_json(strip_timing(one)) == render_json(strip_timing(many))


def test_big_integers_become_strings():
    assert to_jsonable(2**60) == str(2**60)
    assert to_jsonable(2**53) == 2**53
    assert to_jsonable(-(2**70)) == str(-(2**70))


def test_verify_all_budget_skips_loudly(capsys):
    from ffincidence import commands

    rep = commands.cmd_verify_all(budget=10**4)
    skipped = [c for c in rep["results"] if c["status"] == "skipped"]
    assert skipped and all("cost" in c for c in skipped)
    assert all(c["status"] == "pass" for c in rep["results"] if c["status"] != "skipped")
