import json

import pandas as pd
import pytest

from padic_linv.cli import main
from padic_linv.config import RunConfig
from padic_linv.reproduce import CRITERIA, results_table, run_criteria


def test_criteria_names():
    assert list(CRITERIA) == [f"A{i}" for i in range(1, 9)]


def test_unknown_criterion():
    with pytest.raises(KeyError):
        run_criteria(["A0"], RunConfig())


def test_slope_criterion():
    (result,) = run_criteria(["A1"], RunConfig(prec=12))
    assert result.passed
    assert result.cases == 3


def test_property_suites_are_seeded():
    cfg = RunConfig(prec=10, seed=7)
    first = run_criteria(["A8"], cfg)
    second = run_criteria(["A8"], cfg)
    assert first == second
    assert first[0].passed, first[0].detail
    # four suites, six doubling suites, one of them a single ell_minus case
    assert first[0].cases == 200 * 9 + 1


def test_results_keep_order_across_workers():
    results = run_criteria(["A6", "A1"], RunConfig(prec=12, workers=2))
    assert [r.criterion for r in results] == ["A6", "A1"]
    df = results_table(results)
    assert list(df.columns) == ["criterion", "passed", "cases", "detail"]


def test_reproduce_command_writes_logs_and_csv(tmp_path, capsys):
    csv = tmp_path / "results.csv"
    logs = tmp_path / "logs"
    code = main(["reproduce", "all", "--only", "A1", "--prec", "12", "--csv", str(csv), "--log-dir", str(logs), "--json"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["criteria"][0]["criterion"] == "A1"
    assert pd.read_csv(csv)["passed"].tolist() == [True]
    record = json.loads((logs / "A1.jsonl").read_text(encoding="utf-8").splitlines()[0])
    assert record["passed"] is True
    assert (logs / "padic_linv.log").exists()
