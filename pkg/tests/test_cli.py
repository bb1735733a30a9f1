import os

import pytest

from main import main
from src.utils.serialization import load_json


def test_export(tmp_path):
    out = str(tmp_path)
    assert main(["export", "--out", out]) == 0
    for name in ("lie_algebra", "pq_tables", "constants", "lambda_table", "connection_nabla",
                 "connection_casimir", "connection_twist", "normal_form"):
        assert os.path.exists(os.path.join(out, f"{name}.json")), name
    constants = load_json(os.path.join(out, "constants.json"), "constants")
    assert constants["level"] == "symbolic"
    table = load_json(os.path.join(out, "lambda_table.json"), "lambda_table")
    assert len(table["generators"]) == 3


def test_monodromy(tmp_path):
    out = str(tmp_path)
    assert main(["monodromy", "--out", out, "--homotopy"]) == 0
    data = load_json(os.path.join(out, "monodromy.json"), "monodromy")
    assert data["hbar"] == "1/8"
    assert len(data["results"]) == 1


def test_monodromy_plots(tmp_path):
    out = str(tmp_path)
    assert main(["monodromy", "--out", out, "--connection", "casimir", "--vmod", "defining", "--plot"]) == 0
    for name in ("eigenvalue_sweep.csv", "eigenvalue_sweep.png", "eigenvalues.png", "loops.png"):
        assert os.path.exists(os.path.join(out, name)), name


@pytest.mark.parametrize("argv", [
    ["export", "--k", "2"],
    ["export", "--k", "abc"],
    ["monodromy", "--hbar", "1/0"],
    ["verify-all", "--N", "0"],
])
def test_configuration_errors(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path)]) == 2


def test_unknown_type_is_an_argument_error():
    with pytest.raises(SystemExit) as info:
        main(["export", "--type", "G2"])
    assert info.value.code == 2


@pytest.mark.slow
def test_verify_all(tmp_path):
    out = str(tmp_path)
    assert main(["verify-all", "--out", out, "--D", "1"]) == 0
    report = load_json(os.path.join(out, "report.json"), "report")
    assert report["passed"]
