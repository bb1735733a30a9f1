import json
from fractions import Fraction

import pandas as pd
import pytest

from src.modules.fock import B, FockModule
from src.utils.errors import ConfigError
from src.utils.serialization import (SCHEMA, dump_json, load_json, rational_to_str, str_to_rational,
                                     vector_to_json, write_csv)


def test_rational_strings():
    assert rational_to_str(Fraction(-3, 6)) == "-1/2"
    assert rational_to_str(4) == "4/1"
    assert str_to_rational("-1/2") == Fraction(-1, 2)
    with pytest.raises(ConfigError):
        str_to_rational("x")


def test_dump_and_load(tmp_path, a1):
    path = dump_json("lie_algebra", a1.to_json(), str(tmp_path / "sub" / "lie_algebra.json"))
    with open(path) as f:
        payload = json.load(f)
    assert payload["schema"] == SCHEMA
    assert payload["kind"] == "lie_algebra"
    data = load_json(path, "lie_algebra")
    assert data["cartan_type"] == "A1"


def test_missing_keys(tmp_path):
    with pytest.raises(ConfigError):
        dump_json("report", {"config": {}}, str(tmp_path / "report.json"))
    with pytest.raises(ConfigError):
        dump_json("unknown", {}, str(tmp_path / "x.json"))


def test_load_rejects_other_schema_or_kind(tmp_path):
    path = tmp_path / "old.json"
    path.write_text(json.dumps({"schema": "vacmod/0", "kind": "report", "data": {}}))
    with pytest.raises(ConfigError):
        load_json(str(path))
    good = dump_json("report", {"config": {}, "checks": [], "passed": True}, str(tmp_path / "report.json"))
    with pytest.raises(ConfigError):
        load_json(good, "monodromy")


def test_vector_to_json(a1, a1_ring):
    module = FockModule(a1, a1_ring, 1)
    v = {((), 0): a1_ring.H[0], (((B, 0, -1),), 0): a1_ring.one}
    assert vector_to_json(module, v) == [[[], 0, "H1"], [["b1[-1]"], 0, "1"]]


def test_write_csv(tmp_path):
    path = write_csv(pd.DataFrame({"hbar": [0.0, 0.5], "argument": [0.0, 3.14]}), str(tmp_path / "sweep.csv"))
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["hbar", "argument"]
    assert len(frame) == 2
