# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains functions for writing experiment results as text tables, CSV or
JSON.

Every format carries the same columns, and every row carries the
convergence metadata columns N, Q_r, Q_a, D and residual (empty where they
do not apply). Floating-point values are written with 12 significant
digits so that identical configurations produce identical bytes.
"""

import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import TextIO

import sympy
from tabulate import tabulate

from cspi import util

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

METADATA_COLUMNS = ["N", "Q_r", "Q_a", "D", "residual"]

EXTENSIONS = {"text": [".txt"], "csv": [".csv"], "json": [".json"]}


@dataclass
class Result:
    """
    The rows produced by one subcommand.

    Attributes
    ----------
    command: str
        The subcommand name.

    columns: list[str]
        The subcommand's own columns; the metadata columns are appended.

    rows: list[dict]
        One mapping per row. Missing metadata entries are written as empty.

    config: dict
        The resolved parameters, echoed for provenance.

    version: str
        The version of cspi that produced the rows.
    """

    command: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    version: str = ""

    @property
    def all_columns(self) -> list[str]:
        extra = [c for c in METADATA_COLUMNS if c not in self.columns]
        return self.columns + extra

    def records(self) -> list[dict]:
        """
        Returns
        -------
        list[dict]
            The rows with every column present, as JSON-ready values.
        """
        return [
            {c: json_value(row.get(c)) for c in self.all_columns}
            for row in self.rows
        ]


def format_value(value) -> str:
    """
    Returns
    -------
    str
        The canonical text form of a result value.
    """
    value = json_value(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def json_value(value):
    """
    Convert a result value to a JSON-compatible value with the fixed
    precision of every output format.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, sympy.Basic):
        return str(value)
    if isinstance(value, int):
        return value
    if hasattr(value, "__index__"):
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f"{value:.12g}")


def _provenance(result: Result) -> list[str]:
    lines = [
        f"cspi {result.version}",
        f"schema = {SCHEMA_VERSION}",
        f"command = {result.command}",
    ]
    for key, value in result.config.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(format_value(v) for v in value)
        else:
            value = format_value(value)
        lines.append(f"{key} = {value}")
    return lines


def write_text(result: Result, stream: TextIO):
    """
    Write a table followed by the provenance block.
    """
    data = [
        [format_value(row.get(c)) for c in result.all_columns]
        for row in result.rows
    ]
    print(
        tabulate(
            data,
            headers=result.all_columns,
            tablefmt="simple_grid",
            disable_numparse=True,
            stralign="right",
        ),
        file=stream,
    )
    for line in _provenance(result):
        print(line, file=stream)


def write_csv(result: Result, stream: TextIO):
    """
    Write '# key = value' provenance lines, a header and one line per row.
    """
    for line in _provenance(result):
        stream.write(f"# {line}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(result.all_columns)
    for row in result.rows:
        writer.writerow(
            [format_value(row.get(c)) for c in result.all_columns],
        )


def to_json(result: Result) -> dict:
    """
    Returns
    -------
    dict
        The JSON document of `result`, validated against the results
        schema.

    Raises
    ------
    ValueError
        If the document fails validation.
    """
    document = {
        "schema": SCHEMA_VERSION,
        "version": result.version,
        "command": result.command,
        "config": {k: _json_config(v) for k, v in result.config.items()},
        "columns": result.all_columns,
        "rows": result.records(),
    }
    util._validate_json(document, "results")
    return document


def _json_config(value):
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    return json_value(value)


def write_json(result: Result, stream: TextIO):
    json.dump(to_json(result), stream, indent=2)
    stream.write("\n")


WRITERS = {"text": write_text, "csv": write_csv, "json": write_json}


def write(result: Result, fmt: str = "text", path: str | None = None):
    """
    Write `result` in format `fmt` to `path`, or to stdout.

    Raises
    ------
    ValueError
        If `fmt` is unknown, or `path` is invalid or has the wrong
        extension for `fmt`.
    """
    if fmt not in WRITERS:
        raise ValueError(f"Unknown output format '{fmt}'.")
    if path is None:
        WRITERS[fmt](result, sys.stdout)
        return
    if not util.valid_path(path):
        raise ValueError(f"{path} is not a valid path.")
    util.ensure_ext(path, EXTENSIONS[fmt])
    with util.safe_open_write(path) as f:
        WRITERS[fmt](result, f)
    log.info(f"results written to {path}")

