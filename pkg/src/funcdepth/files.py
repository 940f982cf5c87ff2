"""CSV and JSON formats used by the command line.

Sample files have a header of grid abscissae, optionally followed by a
``label`` column, and one row per curve. Floats are written with Python's
shortest round-trip ``repr`` so a written sample reads back bit-identical.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from typing import Iterable, Optional, TextIO

import numpy as np

from .core import FunctionalDataError, FunctionalSample, Grid
from .evaluation import BenchmarkConfig, ResultTable

__all__ = [
    "ParseError",
    "ConfigError",
    "LABELS",
    "format_float",
    "read_sample_csv",
    "parse_sample_csv",
    "write_sample_csv",
    "write_curve_csv",
    "write_depths_csv",
    "load_config",
    "config_from_dict",
    "write_results",
    "RESULT_COLUMNS",
]

LABELS = {"normal": False, "outlier": True}
RESULT_COLUMNS = ("method", "model", "mean_ise", "se_ise", "S")


class ParseError(FunctionalDataError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(FunctionalDataError):
    """Benchmark configuration with unknown keys or values of the wrong type."""


def format_float(x) -> str:
    return repr(float(x))


def _number(text, line):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"cannot parse {text.strip()!r} as a number", line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text.strip()!r}", line)
    return value


def read_sample_csv(fh: TextIO) -> FunctionalSample:
    reader = csv.reader(fh)
    header = None
    rows, labels = [], []
    for line_no, record in enumerate(reader, start=1):
        if not record or all(not cell.strip() for cell in record):
            continue
        if header is None:
            header = [cell.strip() for cell in record]
            has_label = header[-1].lower() == "label"
            names = header[:-1] if has_label else header
            if not names:
                raise ParseError("header has no grid points", line_no)
            points = [_number(cell, line_no) for cell in names]
            if any(b <= a for a, b in zip(points, points[1:])):
                raise ParseError("grid abscissae in the header must be strictly increasing",
                                 line_no)
            width = len(header)
            continue
        if len(record) != width:
            raise ParseError(f"expected {width} fields, found {len(record)}", line_no)
        if has_label:
            tag = record[-1].strip().lower()
            if tag not in LABELS:
                raise ParseError(f"label must be 'normal' or 'outlier', got {tag!r}", line_no)
            labels.append(LABELS[tag])
            record = record[:-1]
        rows.append([_number(cell, line_no) for cell in record])
    if header is None:
        raise ParseError("empty file")
    if not rows:
        raise ParseError("no curves after the header")
    return FunctionalSample(Grid(points), np.array(rows), labels if has_label else None)


def parse_sample_csv(path) -> FunctionalSample:
    """Read and validate a sample file; ``"-"`` reads standard input."""
    if str(path) == "-":
        import sys

        return read_sample_csv(sys.stdin)
    with open(path, newline="") as fh:
        return read_sample_csv(fh)


def write_sample_csv(sample: FunctionalSample, fh: TextIO, labels: Optional[bool] = None):
    if labels is None:
        labels = sample.labels is not None
    header = [format_float(t) for t in sample.grid.points]
    if labels:
        header.append("label")
    fh.write(",".join(header) + "\n")
    for i, row in enumerate(sample.values):
        cells = [format_float(v) for v in row]
        if labels:
            flag = bool(sample.labels[i]) if sample.labels is not None else False
            cells.append("outlier" if flag else "normal")
        fh.write(",".join(cells) + "\n")


def write_curve_csv(grid: Grid, curve, fh: TextIO):
    fh.write(",".join(format_float(t) for t in grid.points) + "\n")
    fh.write(",".join(format_float(v) for v in curve) + "\n")


def write_depths_csv(depths, fh: TextIO, order: Optional[Iterable[int]] = None):
    fh.write("index,depth\n")
    if order is None:
        order = range(len(depths))
    for i in order:
        fh.write(f"{int(i)},{format_float(depths[i])}\n")


_CONFIG_TYPES = {
    "master_seed": int,
    "S": int,
    "n": int,
    "T": int,
    "q": float,
    "alpha": float,
    "K": float,
    "models": list,
    "methods": list,
    "band_J": int,
    "mbd_j": int,
}


def config_from_dict(raw: dict) -> BenchmarkConfig:
    if not isinstance(raw, dict):
        raise ConfigError("benchmark config must be a JSON object")
    unknown = sorted(set(raw) - set(_CONFIG_TYPES))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        kind = _CONFIG_TYPES[key]
        if isinstance(value, bool):
            raise ConfigError(f"{key} must be {kind.__name__}, got a boolean")
        if kind is int and not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        if kind is float and not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        if kind is list:
            if not isinstance(value, list):
                raise ConfigError(f"{key} must be a list, got {value!r}")
            item = int if key == "models" else str
            if not all(isinstance(v, item) and not isinstance(v, bool) for v in value):
                raise ConfigError(f"{key} must be a list of {item.__name__}")
            value = tuple(v.lower() if item is str else v for v in value)
        elif kind is float:
            value = float(value)
        kwargs[key] = value
    try:
        return BenchmarkConfig(**kwargs)
    except FunctionalDataError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> BenchmarkConfig:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(raw)


def write_results(table: ResultTable, fh: TextIO, fmt: str = "csv",
                  config: Optional[BenchmarkConfig] = None):
    if fmt == "csv":
        fh.write(",".join(RESULT_COLUMNS) + "\n")
        for r in table:
            fh.write(f"{r.method},{r.model},{format_float(r.mean_ise)},"
                     f"{format_float(r.se_ise)},{r.S}\n")
    elif fmt == "json":
        doc = {"rows": [dataclasses.asdict(r) for r in table]}
        if config is not None:
            cfg = dataclasses.asdict(config)
            cfg["models"] = list(cfg["models"])
            cfg["methods"] = list(cfg["methods"])
            doc = {"config": cfg, **doc}
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    else:
        raise ValueError(f"unknown result format {fmt!r}")
