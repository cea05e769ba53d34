from __future__ import annotations

import json
import math
from dataclasses import fields, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

import pandas as pd


SCHEMA = "v1"


def to_jsonable(obj: Any) -> Any:
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else str(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    return obj


def document(obj: Any, kind: Optional[str] = None) -> dict[str, Any]:
    body = to_jsonable(obj)
    doc = body if isinstance(body, dict) else {"result": body}
    doc = {**doc, "schema": SCHEMA}
    if kind is not None:
        doc["kind"] = kind
    return doc


def dumps(obj: Any, kind: Optional[str] = None, indent: Optional[int] = 2) -> str:
    return json.dumps(document(obj, kind), ensure_ascii=False, indent=indent, sort_keys=True)


def write_json(path: Path, obj: Any, kind: Optional[str] = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj, kind) + "\n", encoding="utf-8")


def rows_frame(rows: Iterable[object]) -> pd.DataFrame:
    return pd.DataFrame([to_jsonable(r) for r in rows])


def write_table_csv(path: Path, rows: Iterable[object]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    df = rows_frame(rows)
    df.to_csv(path, index=False)
