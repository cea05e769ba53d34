from pathlib import Path

import pytest

from padic_linv.config import PREC_ENV, RunConfig, resolve_config
from padic_linv.errors import InvalidParameters

EXAMPLE = Path(__file__).resolve().parents[1] / "configs" / "run.example.yaml"


def test_defaults(monkeypatch):
    monkeypatch.delenv(PREC_ENV, raising=False)
    cfg = resolve_config(None)
    assert (cfg.p, cfg.prec, cfg.truncation, cfg.mode) == (29, 30, 12, "human")


def test_example_file_loads(monkeypatch):
    monkeypatch.delenv(PREC_ENV, raising=False)
    assert resolve_config(str(EXAMPLE)) == RunConfig()


def test_file_aliases_and_flag_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv(PREC_ENV, "40")
    path = tmp_path / "run.yaml"
    path.write_text("p: 7\nN: 15\nD: 9\n", encoding="utf-8")
    cfg = resolve_config(str(path))
    assert (cfg.p, cfg.prec, cfg.truncation) == (7, 15, 9)
    assert resolve_config(str(path), prec=20, p=None).prec == 20


def test_env_precision_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv(PREC_ENV, "12")
    path = tmp_path / "run.json"
    path.write_text('{"p": 11}', encoding="utf-8")
    assert resolve_config(str(path)).prec == 12
    monkeypatch.setenv(PREC_ENV, "twelve")
    with pytest.raises(InvalidParameters):
        resolve_config(None)


def test_validation():
    with pytest.raises(InvalidParameters):
        RunConfig(p=2)
    with pytest.raises(InvalidParameters):
        RunConfig(p=15)
    with pytest.raises(InvalidParameters):
        RunConfig(prec=5)
    with pytest.raises(InvalidParameters):
        RunConfig(mode="xml")
    with pytest.raises(InvalidParameters):
        RunConfig.from_dict({"colour": "blue"})
