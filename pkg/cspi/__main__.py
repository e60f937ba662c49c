#!/usr/bin/env python3
# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
This script is the main executable of cspi.
"""

import argparse
import logging
import math
import re
import sys

import numpy as np

from cspi import (
    __version__,
    config,
    fock,
    gaussian,
    lattice,
    parser,
    quadrature,
    report,
    spin,
    symbols,
    util,
)

log = logging.getLogger("cspi")
version = __version__

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_VALIDATION = 3

# Errors caused by the configuration rather than the computation.
CONFIG_ERRORS = (
    config.ConfigError,
    parser.TokenError,
    parser.ParseError,
    gaussian.InvalidParameterError,
    gaussian.StepSizeError,
    fock.DimensionError,
    fock.UnsupportedHamiltonianError,
    lattice.KernelMismatchError,
    quadrature.QuadratureError,
    spin.SpinError,
    symbols.SymbolKindError,
)


def _help_string(*lines: str, is_long=False, is_last=False):
    """
    Parameters
    ----------
    *lines: str
        Each line in the help string.

    is_long: bool
        A flag indicating whether the option is long enough to generate an
        initial newline by default.

    is_last: bool
        A flag indicating whether the option is the last in the list.

    Returns
    -------
        An argparse help string formatted as a paragraph.
    """
    result = ""

    # A long option like --prescription will force a newline.
    if not is_long:
        result = "\n"

    # argparse.HelpFormatter indents by 24 characters.
    # We cannot override this directly, but can delete them with backspaces.
    lines = ["\b" * 20 + x for x in lines]

    # The additional space is required for argparse to respect newlines.
    result += "\n".join(lines)

    if not is_last:
        result += "\n "

    return result


class Formatter(logging.Formatter):
    def __init__(self, *, colors: bool = False):
        self.colors = colors

    def format(self, record: logging.LogRecord) -> str:
        msg = record.getMessage()
        level = record.levelname.lower()

        # Display info messages with no special formatting.
        if level == "info":
            return f"{msg}"

        # Drop colors if requested.
        if not self.colors:
            return f"{level}: {msg}"

        # Otherwise, use ASCII codes to improve readability.
        BOLD = "\033[1m"
        DEFAULT = "\033[39m"
        YELLOW = "\033[93m"
        RED = "\033[91m"
        RESET = "\033[0m"

        if level == "warning":
            color = YELLOW
        elif level == "error":
            color = RED
        else:
            color = DEFAULT
        return f"{BOLD}{color}{level}{RESET}: {msg}"


class MetaWarning:
    """
    A MetaWarning is used to represent multiple warnings, and provide suggested
    actions to the user.
    """

    def __init__(self, regex: str, msg: str):
        self.regex = re.compile(regex)
        self.msg = msg
        self._count = 0

    def inspect(self, record: logging.LogRecord):
        if self.regex.search(record.getMessage()):
            self._count += 1

    def warn(self):
        if self._count == 0:
            return
        log.warning(self.msg.format(self._count))


class WarningAggregator(logging.Filter):
    """
    Inspect warnings to generate meta-warnings and statistics.
    """

    def __init__(self):
        self.meta_warnings = [
            MetaWarning(".", "{} warnings generated during the run."),
            MetaWarning(
                "coherent state truncation",
                "{} coherent states were truncated.\n"
                + "  Suggested solutions:\n"
                + "  - Increase the Fock-space dimension with --dim.",
            ),
            MetaWarning(
                "quadrature aliasing|does not resolve the identity",
                "{} quadrature grids did not resolve the identity.\n"
                + "  Suggested solutions:\n"
                + "  - Increase --radial-order above half the largest index.\n"
                + "  - Increase --angular-order above the largest index gap.",
            ),
            MetaWarning(
                "not converged|not finite and positive|imaginary part",
                "{} lattice traces were not converged or not stable.\n"
                + "  Suggested solutions:\n"
                + "  - Increase --slices.\n"
                + "  - Increase --radial-order.",
            ),
        ]

    def filter(self, record: logging.LogRecord) -> bool:
        if record.levelno == logging.WARNING:
            for meta_warning in self.meta_warnings:
                meta_warning.inspect(record)

        # Do not filter anything.
        return True

    def warn(self):
        for meta_warning in self.meta_warnings:
            meta_warning.warn()


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"'{text}' is not a comma-separated list of integers",
        )


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _common_parser() -> argparse.ArgumentParser:
    """
    Options shared by every subcommand.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-h",
        "--help",
        action="help",
        help=_help_string("Display help message and exit."),
    )
    common.add_argument(
        "-c",
        "--config",
        dest="config_file",
        metavar="<path>",
        help=_help_string(
            "TOML file with a table of parameters per subcommand.",
            "Command-line options take precedence.",
            is_long=True,
        ),
    )
    common.add_argument(
        "-f",
        "--format",
        dest="format",
        choices=config.FORMATS,
        help=_help_string("Output format. Defaults to text.", is_long=True),
    )
    common.add_argument(
        "-o",
        "--output",
        dest="output",
        metavar="<path>",
        help=_help_string(
            "Write results to this file instead of stdout.",
            is_long=True,
        ),
    )
    common.add_argument(
        "--log-file",
        dest="log_file",
        metavar="<path>",
        help=_help_string(
            "Also write log messages to this file.",
            is_long=True,
        ),
    )
    common.add_argument(
        "-v",
        "--verbose",
        dest="verbose",
        action="count",
        default=0,
        help=_help_string("Increase verbosity level."),
    )
    common.add_argument(
        "-q",
        "--quiet",
        dest="quiet",
        action="count",
        default=0,
        help=_help_string("Decrease verbosity level.", is_last=True),
    )
    return common


def _add_gaussian_options(subparser, slices_type=int):
    subparser.add_argument("--beta", type=float, metavar="<beta>")
    subparser.add_argument("--mu", type=float, metavar="<mu>")
    subparser.add_argument(
        "--prescription",
        type=_str_list,
        metavar="<name>",
        help=_help_string(
            "minus, plus or symmetric (or wick, antiwick, weyl).",
            "May be a comma-separated list. Defaults to all three.",
            is_long=True,
        ),
    )
    subparser.add_argument("--slices", type=slices_type, metavar="<N>")


def _add_grid_options(subparser):
    subparser.add_argument("--radial-order", type=int, metavar="<Q_r>")
    subparser.add_argument("--angular-order", type=int, metavar="<Q_a>")


def _add_model_options(subparser):
    subparser.add_argument("--beta", type=float, metavar="<beta>")
    subparser.add_argument("--U", type=float, metavar="<U>")
    subparser.add_argument("--mu", type=float, metavar="<mu>")
    subparser.add_argument(
        "--dim",
        type=int,
        metavar="<D>",
        help=_help_string("Fock-space truncation.", is_long=True),
    )
    subparser.add_argument(
        "--rule",
        choices=["midpoint", "average"],
        help=_help_string(
            "Where symmetric naive kernels evaluate their symbol:",
            "midpoint (Weyl order, the default) or average (the mean",
            "of the Wick and anti-Wick orders).",
            is_long=True,
        ),
    )


def _build_parser() -> argparse.ArgumentParser:
    """
    Build argument parser.
    """
    main_parser = argparse.ArgumentParser(
        prog="cspi",
        description="Coherent-state path integrals " + version,
        formatter_class=argparse.RawTextHelpFormatter,
        add_help=False,
    )
    main_parser.set_defaults(func=None)
    main_parser.add_argument(
        "-h",
        "--help",
        action="help",
        help="Display help message and exit.",
    )
    main_parser.add_argument(
        "--version",
        action="version",
        version=f"cspi {version}",
        help="Display version information and exit.",
    )

    common = _common_parser()
    subparsers = main_parser.add_subparsers(title="commands")

    def add(name, func, description):
        subparser = subparsers.add_parser(
            name,
            help=description,
            description=description,
            formatter_class=argparse.RawTextHelpFormatter,
            parents=[common],
            add_help=False,
        )
        subparser.set_defaults(func=func, command=name)
        return subparser

    ratio = add(
        "gaussian-ratio",
        _gaussian_ratio,
        "Evaluate the Gaussian ratio I_mu / I_mu0.",
    )
    _add_gaussian_options(ratio)
    ratio.add_argument("--mu0", type=float, metavar="<mu0>")
    ratio.add_argument(
        "--method",
        choices=["closed", "integral", "lattice"],
        help=_help_string(
            "Closed form, integral of tr G, or lattice determinants.",
            is_long=True,
        ),
    )
    ratio.add_argument("--quad-points", type=int, metavar="<n>")

    sweep = add(
        "gaussian-lattice",
        _gaussian_lattice,
        "Sweep lattice determinants over N.",
    )
    _add_gaussian_options(sweep, slices_type=_int_list)
    sweep.add_argument("--method", choices=["closed", "lu"])

    transform = add(
        "symbol",
        _symbol,
        "Parse an operator or symbol and transform it.",
    )
    transform.add_argument(
        "--op",
        metavar="<expr>",
        help=_help_string(
            "A polynomial in n, e.g. 'n*(n-1)/2', or a list",
            "'(j,k): c, ...' of coefficients of bd^j b^k.",
            is_long=True,
        ),
    )
    transform.add_argument(
        "--symbol",
        metavar="<expr>",
        help=_help_string(
            "A polynomial in |z|^2, or a list '(j,k): c, ...'.",
            is_long=True,
        ),
    )
    transform.add_argument(
        "--kind",
        choices=["wick", "weyl", "antiwick"],
        help=_help_string("The kind of --symbol.", is_long=True),
    )
    transform.add_argument(
        "--to",
        choices=["wick", "weyl", "antiwick", "operator"],
        help=_help_string("The representation to print.", is_long=True),
    )
    transform.add_argument("--dim", type=int, metavar="<D>")

    run_z = add(
        "lattice-z",
        _lattice_z,
        "Compute one lattice partition function.",
    )
    _add_model_options(run_z)
    _add_grid_options(run_z)
    run_z.add_argument(
        "--kernel",
        choices=[
            "exact",
            "wick-naive",
            "weyl-correct",
            "weyl-linearized",
            "custom",
        ],
    )
    run_z.add_argument(
        "--symbol",
        metavar="<expr>",
        help=_help_string(
            "Symbol of a custom kernel, a polynomial in |z|^2.",
            is_long=True,
        ),
    )
    run_z.add_argument("--prescription", metavar="<name>")
    run_z.add_argument("--slices", type=int, metavar="<N>")
    run_z.add_argument(
        "--refine",
        action="store_const",
        const=True,
        help=_help_string(
            "Double N until converged, then check the grid.",
            is_long=True,
        ),
    )

    anomaly = add(
        "anomaly",
        _anomaly,
        "Compare Bose-Hubbard lattice traces built from different symbols.",
    )
    _add_model_options(anomaly)
    _add_grid_options(anomaly)
    anomaly.add_argument("--slices", type=_int_list, metavar="<N,...>")

    gap = add(
        "spin-gap",
        _spin_gap,
        "Tabulate (S_z^2)_cov - ((S_z)_cov)^2.",
    )
    gap.add_argument("--spins", type=_str_list, metavar="<s,...>")
    gap.add_argument("--z-max", type=float, metavar="<|z|>")
    gap.add_argument("--points", type=int, metavar="<n>")

    identity = add(
        "identity-check",
        _identity_check,
        "Measure the quadrature resolution of identity.",
    )
    _add_grid_options(identity)
    identity.add_argument("--max-index", type=int, metavar="<n>")
    identity.add_argument("--tolerance", type=float, metavar="<tol>")

    return main_parser


def _prescriptions(names) -> list[gaussian.Prescription]:
    if isinstance(names, str):
        names = [names]
    return [gaussian.Prescription.from_name(name) for name in names]


def _gaussian_ratio(cfg: config.ExperimentConfig):
    p = cfg.params
    params = gaussian.GaussianParams(p["beta"], p["mu"], p["mu0"])
    rows = []
    for prescription in _prescriptions(p["prescription"]):
        closed = gaussian.ratio_closed(prescription, params)
        row = {
            "prescription": prescription,
            "method": p["method"],
            "closed_form": closed,
            "trace_ratio": gaussian.ordered_trace_ratio(prescription, params),
        }
        if p["method"] == "integral":
            row["value"] = gaussian.ratio_by_integration(
                prescription,
                params,
                p["quad_points"],
            )
        elif p["method"] == "lattice":
            row["value"] = gaussian.lattice_ratio(
                prescription,
                params,
                p["slices"],
            )
            row["N"] = p["slices"]
        else:
            row["value"] = closed
        row["residual"] = row["value"] - closed
        rows.append(row)
    columns = ["prescription", "method", "value", "closed_form", "trace_ratio"]
    return columns, rows, True


def _gaussian_lattice(cfg: config.ExperimentConfig):
    p = cfg.params
    params = gaussian.GaussianParams(p["beta"], p["mu"])
    rows = []
    for prescription in _prescriptions(p["prescription"]):
        determinants = [
            gaussian.lattice_determinant(prescription, params, n, p["method"])
            for n in p["slices"]
        ]
        ratios = gaussian.error_ratios(determinants)
        for det, ratio in zip(determinants, ratios):
            rows.append(
                {
                    "prescription": prescription,
                    "method": det.method,
                    "determinant": det.value,
                    "limit": det.limit,
                    "normalization": det.normalization,
                    "normalized": det.normalized,
                    "relative_error": det.relative_error,
                    "error_ratio": ratio,
                    "N": det.n_slices,
                    "residual": det.value - det.limit,
                },
            )
    columns = [
        "prescription",
        "method",
        "determinant",
        "limit",
        "normalization",
        "normalized",
        "relative_error",
        "error_ratio",
    ]
    return columns, rows, True


def _symbol(cfg: config.ExperimentConfig):
    p = cfg.params
    if (p["op"] is None) == (p["symbol"] is None):
        raise config.ConfigError(
            "Exactly one of --op or --symbol is required.",
        )

    if p["op"] is not None:
        text = p["op"]
        if ":" in text:
            poly = symbols.NormalPoly(parser.parse_coefficients(text))
        else:
            poly = parser.parse_operator(text)
        source = "operator"
    else:
        text = p["symbol"]
        kind = symbols.SymbolKind.from_name(p["kind"])
        if ":" in text:
            s = symbols.PhaseSymbol(parser.parse_coefficients(text), kind)
        else:
            s = parser.parse_symbol(text, kind)
        poly = symbols.normal_poly(s)
        source = kind.value

    if p["to"] == "operator":
        target = symbols.SymbolKind.WICK
        result = str(poly)
    else:
        target = symbols.SymbolKind.from_name(p["to"])
        result = str(symbols.symbol(poly, target))

    # Round trip through the target symbol, exactly and as a matrix.
    dim = p["dim"]
    target_symbol = symbols.symbol(poly, target)
    exact = symbols.normal_poly(target_symbol) == poly
    rebuilt = symbols.operator_from_symbol(target_symbol, dim)
    deviation = np.max(np.abs(rebuilt.matrix - poly.to_matrix(dim).matrix))
    row = {
        "input": text,
        "from": source,
        "to": p["to"],
        "result": result,
        "D": dim,
        "residual": float(deviation),
    }
    return ["input", "from", "to", "result"], [row], exact


def _grid(p: dict) -> quadrature.QuadratureGrid:
    return quadrature.build_grid(p["radial_order"], p["angular_order"])


def _lattice_z(cfg: config.ExperimentConfig):
    p = cfg.params
    beta, n = p["beta"], p["slices"]
    rule = lattice.SymmetricRule(p["rule"])
    grid = _grid(p)

    if p["kernel"] == "custom":
        if p["symbol"] is None or p["prescription"] is None:
            raise config.ConfigError(
                "A custom kernel requires --symbol and --prescription.",
            )
        prescription = gaussian.Prescription.from_name(p["prescription"])
        s = parser.parse_symbol(p["symbol"], prescription.symbol_kind)
        spec = lattice.KernelSpec.naive(s, prescription, beta, n, rule)
        # Compared with the operator the kernel quantizes.
        z_exact = lattice.continuum_partition(spec, beta, p["dim"])
        expected = 1.0
    else:
        hamiltonian = fock.bose_hubbard_hamiltonian(
            p["U"],
            p["mu"],
            p["dim"],
        )
        z_exact = fock.exact_partition(hamiltonian, beta).value
        choices = lattice.anomaly_choices(
            beta,
            p["U"],
            p["mu"],
            p["dim"],
            rule,
        )
        choice = next(c for c in choices if c.label == p["kernel"])
        prescription = choice.prescription
        expected = choice.expected_ratio
        if choice.mode == lattice.KernelMode.EXACT:
            spec = lattice.KernelSpec.exact(choice.payload, beta, n)
        else:
            spec = lattice.KernelSpec.naive(
                choice.payload,
                prescription,
                beta,
                n,
                rule,
            )

    if p["refine"]:
        refinement = lattice.refine_partition(spec, beta, grid, n)
        results = refinement.history
        converged = refinement.converged
    else:
        results = [lattice.lattice_partition(spec, n, grid)]
        converged = True
    orders = lattice.empirical_order([r.value for r in results])

    rows = []
    for result, order in zip(results, orders):
        ratio = result.value / z_exact
        rows.append(
            {
                "kernel": p["kernel"],
                "prescription": prescription,
                "Z": result.value,
                "Z_exact": z_exact,
                "ratio": ratio,
                "expected_ratio": expected,
                "error_estimate": result.error_estimate,
                "order": order,
                "converged": converged,
                "N": result.n_slices,
                "Q_r": result.radial_order,
                "Q_a": result.angular_order,
                "D": p["dim"],
                "residual": ratio - expected,
            },
        )
    columns = [
        "kernel",
        "prescription",
        "Z",
        "Z_exact",
        "ratio",
        "expected_ratio",
        "error_estimate",
        "order",
        "converged",
    ]
    return columns, rows, converged


def _is_doubling(slices: list[int]) -> bool:
    return all(b == 2 * a for a, b in zip(slices, slices[1:]))


def _anomaly(cfg: config.ExperimentConfig):
    p = cfg.params
    rows = lattice.anomaly_report(
        p["beta"],
        p["U"],
        p["slices"],
        _grid(p),
        mu=p["mu"],
        dim=p["dim"],
        symmetric_rule=lattice.SymmetricRule(p["rule"]),
        show_progress=sys.stderr.isatty(),
    )
    factors = lattice.anomaly_factors(rows)
    expected = math.exp(p["beta"] * p["U"] / 8)

    orders = {}
    if _is_doubling(p["slices"]):
        for label in {row.label for row in rows}:
            series = [row for row in rows if row.label == label]
            values = [row.z_lattice for row in series]
            for row, order in zip(series, lattice.empirical_order(values)):
                orders[(row.n_slices, label)] = order

    records = []
    for row in rows:
        records.append(
            {
                "symbol": row.label,
                "prescription": row.prescription,
                "Z_lattice": row.z_lattice,
                "Z_exact": row.z_exact,
                "ratio": row.ratio,
                "expected_ratio": row.expected_ratio,
                "anomaly_factor": factors.get(row.n_slices),
                "order": orders.get((row.n_slices, row.label)),
                "N": row.n_slices,
                "Q_r": row.radial_order,
                "Q_a": row.angular_order,
                "D": row.dim,
                "residual": row.residual,
            },
        )

    exact = all(
        math.isclose(f, expected, rel_tol=1e-10) for f in factors.values()
    )
    if not exact:
        log.error(
            "Z(weyl-correct) / Z(weyl-linearized) differs from "
            + f"e^(beta U/8) = {expected:.12g}.",
        )
    unstable = [
        row
        for row in rows
        if not (np.isfinite(row.z_lattice) and row.z_lattice > 0)
    ]
    for row in unstable:
        log.error(
            f"Z({row.label}) at N = {row.n_slices} is not finite and "
            + f"positive ({row.z_lattice:.6g}).",
        )
    valid = exact and not unstable
    columns = [
        "symbol",
        "prescription",
        "Z_lattice",
        "Z_exact",
        "ratio",
        "expected_ratio",
        "anomaly_factor",
        "order",
    ]
    return columns, records, valid


def _spin_gap(cfg: config.ExperimentConfig):
    p = cfg.params
    for s in p["spins"]:
        spin.spin_rep(s).check_algebra()
    moduli = np.linspace(0.0, p["z_max"], p["points"])
    grid = spin.gap_grid(p["spins"], moduli)
    rows = [
        {
            "s": row.s,
            "z": row.z,
            "gap": row.gap,
            "closed_form": row.closed_form,
            "residual": row.gap - row.closed_form,
        }
        for row in grid
    ]
    valid = all(
        row.deviation <= 1e-12 and (row.z == 0 or row.gap > 0) for row in grid
    )
    if not valid:
        log.error("spin gap deviates from 2s|z|^2/(1+|z|^2)^2.")
    return ["s", "z", "gap", "closed_form"], rows, valid


def _identity_check(cfg: config.ExperimentConfig):
    p = cfg.params
    grid = _grid(p)
    dim = p["max_index"] + 1
    check = quadrature.check_identity(grid, dim, p["tolerance"])
    deviation = quadrature.identity_deviation(grid, dim)
    aliased = {(m, n) for m, n, _ in check.aliased}
    rows = []
    for m in range(dim):
        for n in range(m, dim):
            rows.append(
                {
                    "m": m,
                    "n": n,
                    "deviation": float(deviation[m, n]),
                    "guaranteed": grid.guarantees(m, n),
                    "aliased": (m, n) in aliased,
                    "Q_r": grid.radial_order,
                    "Q_a": grid.angular_order,
                    "D": dim,
                    "residual": float(deviation[m, n]),
                },
            )
    valid = check.max_deviation <= p["tolerance"]
    if not valid:
        log.error(
            f"resolution of identity deviates by {check.max_deviation:.3g} "
            + "inside the guaranteed range.",
        )
    columns = ["m", "n", "deviation", "guaranteed", "aliased"]
    return columns, rows, valid


def _configure_logging(args: argparse.Namespace):
    """
    Configure logging such that:
    - Only errors are written to stderr by default
    - Messages written to stderr are based on -q and -v flags
    - All messages are written to a log file, if requested
    - Meta-warnings and statistics are generated by a WarningAggregator
    """
    aggregator = WarningAggregator()
    log.setLevel(logging.DEBUG)
    handlers = []

    if args.log_file is not None:
        if not util.valid_path(args.log_file):
            raise config.ConfigError(f"{args.log_file} is not a valid path.")
        file_handler = logging.FileHandler(args.log_file, mode="w")
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(Formatter())
        file_handler.addFilter(aggregator)
        handlers.append(file_handler)

    log_level = max(1, logging.ERROR - 10 * (args.verbose - args.quiet))
    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(log_level)
    stderr_handler.setFormatter(Formatter(colors=sys.stderr.isatty()))
    stderr_handler.addFilter(aggregator)
    handlers.append(stderr_handler)

    for handler in handlers:
        log.addHandler(handler)
    return aggregator, stderr_handler, handlers


def cli(argv: list[str]) -> int:
    """
    Run a subcommand.

    Returns
    -------
    int
        0 on success, 3 if a convergence or validation check failed.

    Raises
    ------
    Exception
        Any error raised while configuring or computing.
    """
    main_parser = _build_parser()
    args = main_parser.parse_args(argv)
    command = args.func

    if command is None:
        main_parser.print_help()
        sys.exit(2)

    aggregator, stderr_handler, handlers = _configure_logging(args)
    try:
        file_config = None
        if args.config_file is not None:
            file_config = config.load_config_file(args.config_file)
        keys = set(config.DEFAULTS[args.command]) | {"format", "output"}
        overrides = {k: v for k, v in vars(args).items() if k in keys}
        cfg = config.resolve(args.command, file_config, overrides)

        columns, rows, valid = command(cfg)
        result = report.Result(
            cfg.command,
            columns,
            rows,
            cfg.provenance(),
            version,
        )
        report.write(result, cfg.format, cfg.output)

        # Generate meta-warnings and statistics.
        # Temporarily override log_level to ensure they are visible.
        log_level = stderr_handler.level
        stderr_handler.setLevel(min(log_level, logging.WARNING))
        aggregator.warn()
        stderr_handler.setLevel(log_level)
    finally:
        for handler in handlers:
            log.removeHandler(handler)
            handler.close()

    return EXIT_SUCCESS if valid else EXIT_VALIDATION


def _log_error(e: Exception):
    # cli has already detached its handlers.
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(Formatter(colors=sys.stderr.isatty()))
    log.addHandler(handler)
    try:
        log.error(str(e))
    finally:
        log.removeHandler(handler)


def run(argv: list[str]) -> int:
    """
    Run a subcommand and map any error to an exit code.

    Returns
    -------
    int
        0 on success, 2 for invalid configuration, 3 for convergence or
        validation failures and 1 for anything else.
    """
    try:
        return cli(argv)
    except CONFIG_ERRORS as e:
        _log_error(e)
        return EXIT_CONFIG
    except util.ConvergenceError as e:
        _log_error(e)
        return EXIT_VALIDATION
    except Exception as e:
        _log_error(e)
        return EXIT_FAILURE


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    sys.argv[0] = "cspi"
    main()
