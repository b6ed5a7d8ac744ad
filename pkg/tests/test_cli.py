import csv
import io

import pytest

from kdist.cli import BENCH_COLUMNS, run


def out(capsys, args):
    status = run(args)
    return status, capsys.readouterr()


def test_prep(capsys):
    status, cap = out(capsys, ["prep", "--t1", "1.10", "--n1", "10"])
    assert status == 0
    assert float(cap.out) == pytest.approx(0.777, abs=5e-4)


def test_ksquare_value(capsys):
    status, cap = out(capsys, ["ksquare", "--p", "2", "--q", "20", "--r", "18", "--a2", "46.667",
                               "--x", "36", "--tol", "1e-4"])
    assert status == 0
    assert float(cap.out) == pytest.approx(0.7771, abs=1e-4)


def test_kprime_central_median(capsys):
    status, cap = out(capsys, ["kprime", "--q", "5", "--r", "20", "--a", "0", "--x", "0"])
    assert (status, cap.out.strip()) == (0, "0.5")


def test_six_significant_digits(capsys):
    _, cap = out(capsys, ["corr", "--n", "250", "--rho", "0.8", "--robs", "0.75"])
    assert cap.out.strip() == "0.0226997"


def test_report_flag(capsys):
    status, cap = out(capsys, ["ksquare", "--p", "10", "--q", "20", "--r", "30", "--a2", "500",
                               "--x", "0.1", "--report"])
    assert status == 0
    assert "underflow_adjusted=True" in cap.out
    assert "iterations=" in cap.out


def test_strategy_flag_can_underflow(capsys):
    status, cap = out(capsys, ["ksquare", "--p", "10", "--q", "20", "--r", "30", "--a2", "500",
                               "--x", "0.1", "--strategy", "method2"])
    assert status == 3
    assert "recurrence" in cap.err


def test_exit_statuses(capsys):
    assert run(["kprime", "--q", "-1", "--r", "3", "--a", "1", "--x", "1"]) == 2
    assert run(["kprime", "--q", "1"]) == 64
    assert run(["kprime", "--q", "one", "--r", "3", "--a", "1", "--x", "1"]) == 64
    assert run(["nonsense"]) == 64
    assert run(["ksquare", "--p", "11", "--q", "1199", "--r", "1188", "--a2", "10791", "--x", "972",
                "--max-iter", "5"]) == 3
    capsys.readouterr()


def test_applications_commands(capsys):
    cases = [
        (["predict-t", "--t1", "1.10", "--n1", "10", "--n", "10", "--threshold", "1.734"], 0.334, 5e-4),
        (["predict-t", "--t1", "1.10", "--n1", "10", "--n", "10", "--threshold", "-1.734", "--tail", "lower"],
         0.027, 5e-4),
        (["mcorr", "--n", "100", "--m", "5", "--rho2", "0.5", "--r2obs", "0.33"], 0.0063, 1e-4),
        (["predict-f", "--f0", "0", "--g", "3", "--n0", "10", "--n", "10", "--threshold", "0"], 1.0, 0),
    ]
    for args, expected, tol in cases:
        status, cap = out(capsys, args)
        assert status == 0
        assert float(cap.out) == pytest.approx(expected, abs=tol)
    status, cap = out(capsys, ["corr-ci", "--n", "30", "--robs", "0.6", "--level", "0.95"])
    lo, hi = map(float, cap.out.split())
    assert lo < 0.6 < hi
    status, cap = out(capsys, ["kprime-quantile", "--q", "5", "--r", "8", "--a", "1", "--prob", "0.5"])
    assert status == 0
    status, cap = out(capsys, ["ksquare-quantile", "--p", "3", "--q", "5", "--r", "8", "--a2", "1",
                               "--prob", "0.5"])
    assert status == 0


def test_bench_csv(tmp_path):
    path = tmp_path / "t2.csv"
    assert run(["bench", "--table", "2", "--tol", "1e-4", "--out", str(path)]) == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.DictReader(io.StringIO(raw.decode("utf-8"))))
    assert list(rows[0].keys()) == BENCH_COLUMNS
    assert len(rows) == 11
    assert rows[-1]["gain_pct"] == str(round(100 * (int(rows[-1]["m1_iters"]) - int(rows[-1]["m2_iters"]))
                                           / int(rows[-1]["m1_iters"])))
    again = tmp_path / "again.csv"
    run(["bench", "--table", "2", "--tol", "1e-4", "--out", str(again)])
    assert again.read_bytes() == raw


def test_bench_table1_has_empty_p(capsys):
    assert run(["bench", "--table", "1", "--tol", "1e-4"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 8
    assert all(r["dist"] == "kprime" and r["p"] == "" for r in rows)


def test_bench_rejects_other_tolerances():
    assert run(["bench", "--table", "1", "--tol", "1e-6"]) == 64
