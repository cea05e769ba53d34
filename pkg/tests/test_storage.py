import json
import math
from fractions import Fraction

import pandas as pd

from padic_linv.logging_utils import jsonl_append
from padic_linv.padic import PadicScalar
from padic_linv.reproduce import CriterionResult
from padic_linv.storage import SCHEMA, document, dumps, to_jsonable, write_json, write_table_csv


def test_jsonable_values():
    assert to_jsonable(Fraction(3, 4)) == "3/4"
    assert to_jsonable(Fraction(4, 2)) == 2
    assert to_jsonable(math.inf) == "inf"
    assert to_jsonable({"x": (1, Fraction(1, 2))}) == {"x": [1, "1/2"]}


def test_document_envelope():
    doc = document(PadicScalar.from_rational(7, 5, 3), "padic.value")
    assert doc["schema"] == SCHEMA
    assert doc["kind"] == "padic.value"
    assert doc["digits"] == [2, 1, 0]
    assert document([1, 2]) == {"result": [1, 2], "schema": SCHEMA}


def test_dumps_is_stable():
    obj = {"b": 1, "a": Fraction(1, 3)}
    assert dumps(obj) == dumps(dict(reversed(list(obj.items()))))
    assert "\n" not in dumps(obj, indent=None)


def test_write_json_and_jsonl(tmp_path):
    path = tmp_path / "out" / "value.json"
    write_json(path, CriterionResult("A1", True, 3, "ok"), "criterion")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["criterion"] == "A1" and data["passed"] is True

    log = tmp_path / "logs" / "A1.jsonl"
    jsonl_append(log, CriterionResult("A1", True, 3, "ok"))
    jsonl_append(log, CriterionResult("A1", False, 3, "bad"))
    lines = log.read_text(encoding="utf-8").splitlines()
    assert [json.loads(x)["passed"] for x in lines] == [True, False]


def test_table_csv(tmp_path):
    path = tmp_path / "table.csv"
    write_table_csv(path, [CriterionResult("A1", True, 3, "ok"), CriterionResult("A2", False, 1, "no")])
    df = pd.read_csv(path)
    assert list(df["criterion"]) == ["A1", "A2"]
    assert list(df["passed"]) == [True, False]
