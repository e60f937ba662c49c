# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains functions to build up the configuration of a single experiment
from built-in defaults, an optional TOML file and command-line flags.
"""

import copy
import logging
import os
from dataclasses import dataclass
from pathlib import Path

from cspi import report, util

log = logging.getLogger(__name__)

FORMATS = ["text", "csv", "json"]

_PRESCRIPTIONS = ["minus", "plus", "symmetric"]

DEFAULTS = {
    "gaussian-ratio": {
        "beta": 1.0,
        "mu": 1.0,
        "mu0": 2.0,
        "prescription": _PRESCRIPTIONS,
        "method": "closed",
        "slices": 1024,
        "quad_points": 64,
    },
    "gaussian-lattice": {
        "beta": 1.0,
        "mu": 1.0,
        "prescription": _PRESCRIPTIONS,
        "method": "closed",
        "slices": [16, 32, 64, 128, 256, 512, 1024, 2048, 4096],
    },
    "symbol": {
        "op": None,
        "symbol": None,
        "kind": "wick",
        "to": "weyl",
        "dim": 20,
    },
    "lattice-z": {
        "beta": 1.0,
        "U": 1.0,
        "mu": 0.0,
        "kernel": "weyl-linearized",
        "symbol": None,
        "prescription": None,
        "slices": 64,
        "radial_order": 24,
        "angular_order": 64,
        "dim": 30,
        "rule": "midpoint",
        "refine": False,
    },
    "anomaly": {
        "beta": 1.0,
        "U": 1.0,
        "mu": 0.0,
        "slices": [64, 128, 256],
        "radial_order": 24,
        "angular_order": 64,
        "dim": 30,
        "rule": "midpoint",
    },
    "spin-gap": {
        "spins": ["1/2", "1", "3/2", "2", "5"],
        "z_max": 10.0,
        "points": 100,
    },
    "identity-check": {
        "radial_order": 20,
        "angular_order": 32,
        "max_index": 15,
        "tolerance": 1e-12,
    },
}


class ConfigError(ValueError):
    """
    Represents an experiment configuration that cannot be used.
    """


@dataclass(frozen=True)
class ExperimentConfig:
    """
    The fully resolved and validated configuration of one run.

    Attributes
    ----------
    command: str
        The subcommand.

    params: dict
        The subcommand's parameters, with every key present.

    format: str
        One of 'text', 'csv' or 'json'.

    output: str, optional
        The output path, or None for stdout.
    """

    command: str
    params: dict
    format: str = "text"
    output: str | None = None

    def provenance(self) -> dict:
        """
        Returns
        -------
        dict
            The parameters echoed alongside every result, without unset
            entries.
        """
        return {k: v for k, v in self.params.items() if v is not None}


def load_config_file(path: os.PathLike[str]) -> dict:
    """
    Load and validate a TOML experiment file.

    Raises
    ------
    ConfigError
        If the file is missing, not TOML, or fails validation.
    """
    path = Path(path)
    if not util.valid_path(str(path)):
        raise ConfigError(f"{path} is not a valid path.")
    try:
        util.ensure_ext(path, [".toml"])
    except ValueError as e:
        raise ConfigError(str(e))
    try:
        with open(path, "rb") as f:
            return util._load_toml(f, "config")
    except OSError as e:
        raise ConfigError(f"Could not read {path}: {e.strerror}")
    except ValueError as e:
        raise ConfigError(str(e))


def resolve(
    command: str,
    file_config: dict | None = None,
    overrides: dict | None = None,
) -> ExperimentConfig:
    """
    Merge defaults < config file < flags for `command`, then validate.

    Parameters
    ----------
    command: str
        The subcommand being run.

    file_config: dict, optional
        The loaded TOML experiment file.

    overrides: dict, optional
        Values given on the command line. Entries that are None are
        treated as not given; 'format' and 'output' select the output.

    Raises
    ------
    ConfigError
        If `command` is unknown or the merged parameters are invalid.
    """
    if command not in DEFAULTS:
        raise ConfigError(f"Unknown command '{command}'.")
    file_config = file_config or {}
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}

    params = copy.deepcopy(DEFAULTS[command])
    params.update(file_config.get(command, {}))
    output = dict(file_config.get("output", {}))
    for key in ["format", "output"]:
        if key in overrides:
            output["path" if key == "output" else key] = overrides.pop(key)
    unknown = set(overrides) - set(params)
    if unknown:
        raise ConfigError(
            f"Unknown parameter(s) for {command}: "
            + ", ".join(sorted(unknown)),
        )
    params.update(overrides)

    resolved = {command: params, "output": output}
    try:
        util._validate_json(
            {k: v for k, v in _without_none(resolved).items() if v},
            "config",
        )
    except ValueError as e:
        raise ConfigError(str(e))
    fmt = output.get("format", "text")
    path = output.get("path")
    if path is not None:
        _check_output_path(path, fmt)
    log.info(f"resolved {command} configuration: {params}")
    return ExperimentConfig(command, params, fmt, path)


def _check_output_path(path: str, fmt: str):
    if not util.valid_path(path):
        raise ConfigError(f"{path} is not a valid path.")
    try:
        util.ensure_ext(path, report.EXTENSIONS[fmt])
    except ValueError as e:
        raise ConfigError(str(e))


def _without_none(config: dict) -> dict:
    return {
        section: {k: v for k, v in values.items() if v is not None}
        for section, values in config.items()
    }
