import json

import pytest

from padic_linv.cli import main, parse_character
from padic_linv.config import PREC_ENV
from padic_linv.errors import InvalidParameters


@pytest.fixture(autouse=True)
def _no_env_prec(monkeypatch):
    monkeypatch.delenv(PREC_ENV, raising=False)


def test_unknown_subcommand():
    assert main(["nope"]) == 2


def test_teichmuller_json(capsys):
    assert main(["padic", "teich", "2", "--p", "5", "--prec", "10", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["schema"] == "v1"
    assert out["kind"] == "padic.teich"
    assert out["p"] == 5 and out["prec"] == 10
    assert out["digits"][0] == 2


def test_output_is_byte_identical(capsys):
    argv = ["padic", "log", "6", "--p", "7", "--prec", "12", "--json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_env_precision(monkeypatch, capsys):
    monkeypatch.setenv(PREC_ENV, "12")
    main(["padic", "teich", "2", "--p", "5", "--json"])
    assert json.loads(capsys.readouterr().out)["prec"] == 12
    main(["padic", "teich", "2", "--p", "5", "--prec", "9", "--json"])
    assert json.loads(capsys.readouterr().out)["prec"] == 9


def test_library_errors_exit_1(capsys):
    assert main(["padic", "exp", "1", "--p", "5", "--prec", "10"]) == 1
    assert "OutsideConvergenceDomain" in capsys.readouterr().err


def test_sqrt_with_seed(capsys):
    assert main(["padic", "sqrt", "-1", "--p", "5", "--prec", "8", "--seed-root", "3", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["digits"][0] == 3


def test_parse_character():
    chi = parse_character("quad:-4*omega^1", 5)
    assert (chi.disc, chi.k) == (-4, 1)
    assert parse_character("trivial").is_trivial()
    with pytest.raises(InvalidParameters):
        parse_character("cubic:7")


def test_bernoulli_command(capsys):
    assert main(["lfun", "bernoulli", "--chi", "quad:-4", "--n", "1", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == "-1/2"


def test_general_regulator_command(tmp_path, capsys):
    units = tmp_path / "units.yaml"
    units.write_text(
        "p: 7\nprec: 10\npsi: [1]\n"
        "y_logs: [{rational: 14}]\ny_tau_logs: [{rational: 21}]\n"
        "ord_y0: 2\nslope: {rational: -1}\n",
        encoding="utf-8",
    )
    assert main(["linv", "general", "--units", str(units), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rows"] == 1
    assert out["value"]["val"] == 1


def test_theta_qexp_command(capsys):
    assert main(["theta", "qexp", "--disc", "-23", "--len", "10", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["coeffs"][:3] == [1, -1, -1]
    assert out["level"] == 23


def test_model_report_command(capsys):
    assert main(["localalg", "model", "--case", "i", "--D", "10", "--report", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["dlr_dim"] == 4
    assert out["congruence_psi"] == 1


def test_reproduce_unknown_criterion(capsys):
    assert main(["reproduce", "all", "--only", "Z9"]) == 1
    assert "unknown criteria" in capsys.readouterr().err
