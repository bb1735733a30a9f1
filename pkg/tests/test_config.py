from argparse import Namespace
from fractions import Fraction

import pytest

from src.utils.config import RunConfig, parse_level, parse_rational, workers_from_env
from src.utils.errors import ConfigError


def make_args(**overrides):
    values = dict(command="export", type="A1", N=1, D=1, k="symbolic", hbar="1/8",
                  casimir_variant="truncated", out="output", seed=0, verbose=False)
    values.update(overrides)
    return Namespace(**values)


def test_parse_level():
    assert parse_level("symbolic") is None
    assert parse_level(None) is None
    assert parse_level("3/2") == Fraction(3, 2)
    assert parse_level("-5") == Fraction(-5)


@pytest.mark.parametrize("text", ["abc", "1/0", "1.2.3"])
def test_parse_rational_rejects(text):
    with pytest.raises(ConfigError):
        parse_rational(text)


def test_from_args():
    config = RunConfig.from_args(make_args(k="7", hbar="1/4"))
    assert config.level == 7
    assert config.hbar == Fraction(1, 4)
    assert config.vmod == "adjoint"
    assert not config.plot


@pytest.mark.parametrize("overrides", [
    {"N": 0},
    {"D": -1},
    {"k": "2"},
    {"k": "-3", "type": "A2"},
    {"type": "G2"},
    {"casimir_variant": "other"},
])
def test_invalid_configuration(overrides):
    """Critical levels, k = -k_c and out-of-range parameters are rejected"""
    with pytest.raises(ConfigError):
        RunConfig.from_args(make_args(**overrides))


def test_critical_level_per_type():
    assert RunConfig(cartan_type="B2").critical_level == 3
    RunConfig(cartan_type="B2", level=Fraction(2)).validate()


def test_to_dict():
    data = RunConfig(level=Fraction(5, 2)).to_dict()
    assert data["level"] == "5/2"
    assert data["hbar"] == "1/8"
    assert RunConfig().to_dict()["level"] == "symbolic"


def test_workers_from_env(monkeypatch):
    monkeypatch.delenv("VACMOD_WORKERS", raising=False)
    assert workers_from_env() == 1
    monkeypatch.setenv("VACMOD_WORKERS", "4")
    assert workers_from_env() == 4
    assert RunConfig.from_args(make_args()).workers == 4
    monkeypatch.setenv("VACMOD_WORKERS", "0")
    with pytest.raises(ConfigError):
        workers_from_env()
    monkeypatch.setenv("VACMOD_WORKERS", "many")
    with pytest.raises(ConfigError):
        workers_from_env()
