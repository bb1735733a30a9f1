"""
JSON and CSV export with a versioned schema

Rationals are written as "p/q" strings and coefficient-ring elements as
sympy expression strings, so nothing loses precision on the way out.
"""
import json
import logging
import os
from fractions import Fraction

import pandas as pd

from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

SCHEMA = "vacmod/1"

REQUIRED_KEYS = {
    "lie_algebra": ("cartan_type", "rank", "positive_roots", "structure_constants", "bilinear_form"),
    "pq_tables": ("variables", "P", "Q", "P_all"),
    "constants": ("cartan_type", "N", "level", "constants"),
    "lambda_table": ("cartan_type", "N", "generators"),
    "connection": ("kind", "casimir_variant", "residues"),
    "normal_form": ("input", "gauge", "normal_form"),
    "monodromy": ("connection", "module", "hbar", "results"),
    "report": ("config", "checks", "passed"),
}


def rational_to_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def str_to_rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"not a rational: {text!r}") from e


def vector_to_json(module, v):
    """A module vector as a sorted list of [generator labels, ground index, coefficient]"""
    rows = []
    for (mono, ground), c in v.items():
        rows.append([[module.label(g) for g in mono], ground, module.ring.to_string(c)])
    return sorted(rows, key=lambda row: (len(row[0]), row[0], row[1]))


def envelope(kind, data):
    if kind not in REQUIRED_KEYS:
        raise ConfigError(f"unknown export kind {kind}")
    validate(kind, data)
    return {"schema": SCHEMA, "kind": kind, "data": data}


def validate(kind, data):
    """Raise ConfigError when a required key is missing"""
    missing = [key for key in REQUIRED_KEYS[kind] if key not in data]
    if missing:
        raise ConfigError(f"{kind} export lacks {', '.join(missing)}")
    return data


def dump_json(kind, data, path):
    """
    Write one export file

    Args:
        kind: Key of REQUIRED_KEYS
        data: JSON-ready dictionary
        path: Output file path

    Returns:
        The path written
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        json.dump(envelope(kind, data), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info("wrote %s", path)
    return path


def load_json(path, kind=None):
    """
    Read an export file and check its schema

    Returns:
        The data dictionary
    """
    with open(path) as f:
        payload = json.load(f)
    if payload.get("schema") != SCHEMA:
        raise ConfigError(f"{path}: schema {payload.get('schema')!r}, expected {SCHEMA}")
    found = payload.get("kind")
    if kind is not None and found != kind:
        raise ConfigError(f"{path}: holds {found}, expected {kind}")
    if found not in REQUIRED_KEYS:
        raise ConfigError(f"{path}: unknown export kind {found!r}")
    return validate(found, payload.get("data", {}))


def write_csv(frame, path):
    """Write a pandas DataFrame without its index"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    pd.DataFrame(frame).to_csv(path, index=False)
    logger.info("wrote %s", path)
    return path
