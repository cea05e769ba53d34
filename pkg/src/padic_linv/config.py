from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from .errors import InvalidParameters
from .padic import check_prime


PREC_ENV = "PADIC_LINV_PREC"
MODES = ("human", "json")


def load_config_file(path: Path) -> dict[str, Any]:
    data = path.read_text(encoding="utf-8")
    if path.suffix.lower() in {".yaml", ".yml"}:
        return yaml.safe_load(data) or {}
    return json.loads(data) if data.strip() else {}


def _env_prec() -> Optional[int]:
    raw = os.environ.get(PREC_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidParameters(f"{PREC_ENV}={raw!r} is not an integer") from exc


@dataclass(frozen=True)
class RunConfig:
    p: int = 29
    prec: int = 30
    truncation: int = 12
    mode: str = "human"
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        try:
            check_prime(self.p)
        except ValueError as exc:
            raise InvalidParameters(str(exc)) from exc
        if self.p == 2:
            raise InvalidParameters("p must be odd")
        if self.prec < 8:
            raise InvalidParameters(f"precision {self.prec} is below 8")
        if self.truncation < 2:
            raise InvalidParameters(f"truncation {self.truncation} is below 2")
        if self.mode not in MODES:
            raise InvalidParameters(f"mode must be one of {MODES}")
        if self.workers < 1:
            raise InvalidParameters("workers must be >= 1")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> RunConfig:
        known = {f.name for f in fields(cls)}
        aliases = {"N": "prec", "D": "truncation", "precision": "prec"}
        out: dict[str, Any] = {}
        for key, value in d.items():
            name = aliases.get(key, key)
            if name not in known:
                raise InvalidParameters(f"unknown configuration key {key!r}")
            if value is None:
                continue
            out[name] = value if name == "mode" else int(value)
        if "prec" not in out:
            env = _env_prec()
            if env is not None:
                out["prec"] = env
        return cls(**out)

    def merged(self, **overrides: Any) -> RunConfig:
        """Flags win over file values; None means the flag was not given."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def resolve_config(path: Optional[str], **overrides: Any) -> RunConfig:
    """Flag > file > PADIC_LINV_PREC > built-in default."""
    data = load_config_file(Path(path)) if path else {}
    return RunConfig.from_dict(data).merged(**overrides)
