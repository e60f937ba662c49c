# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains the time-lattice coherent-state path integral for Hamiltonians
diagonal in the number basis, evaluated as the trace of the N-th power of a
transfer matrix on a phase-space quadrature grid.

Two kinds of one-step kernel are supported:
- EXACT: <z1|e^{-eps H}|z2>, which composes exactly through the grid's
  resolution of identity, so Z is independent of N.
- NAIVE: <z1|z2> e^{-eps s(args)} for a phase-space symbol s, the
  discretization of the continuum action. Which arguments s is evaluated
  at is fixed by the prescription.
"""

import dataclasses
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Self

import numpy as np
import scipy.linalg
from tqdm import tqdm

from cspi import fock, util
from cspi.gaussian import Prescription
from cspi.quadrature import QuadratureGrid, build_grid
from cspi.symbols import (
    NormalPoly,
    PhaseSymbol,
    SymbolKind,
    bose_hubbard_poly,
    linearized_weyl_bh,
    normal_poly,
    weyl_symbol,
    wick_symbol,
)

log = logging.getLogger(__name__)

# Defaults for beta <= 2, U <= 2.
DEFAULT_RADIAL_ORDER = 24
DEFAULT_ANGULAR_ORDER = 64
DEFAULT_DIM = 30

REFINE_TOLERANCE = 1e-4
MAX_SLICES = 4096

# Relative imaginary part of Z above which the trace is reported.
IMAGINARY_TOLERANCE = 1e-10

# Number states with beta (E_n - E_min) above this carry no weight in
# double precision.
THERMAL_WINDOW = -math.log(np.finfo(float).eps)


class KernelMismatchError(ValueError):
    """
    Represents a naive kernel whose symbol kind does not belong to its
    prescription.
    """


class KernelMode(Enum):
    EXACT = "exact"
    NAIVE = "naive"


class SymmetricRule(Enum):
    """
    Where a SYMMETRIC naive kernel evaluates its symbol.

    MIDPOINT puts zbar halfway between the two slices and quantizes the
    symbol in Weyl order. AVERAGE takes the mean of the MINUS and PLUS
    values, which quantizes it as the mean of the Wick and anti-Wick
    orders. For quadratic symbols both take G(0) as (G(0+) + G(0-))/2.
    """

    MIDPOINT = "midpoint"
    AVERAGE = "average"


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """
    Attributes
    ----------
    mode: KernelMode
        EXACT or NAIVE.

    epsilon: float
        The time step beta / N.

    prescription: Prescription
        Argument placement of a NAIVE symbol. Ignored for EXACT kernels.

    symbol: PhaseSymbol, optional
        The action's Hamiltonian function (NAIVE only).

    hamiltonian: FockOperator, optional
        The Hamiltonian (EXACT only).

    symmetric_rule: SymmetricRule
        The SYMMETRIC evaluation rule.
    """

    mode: KernelMode
    epsilon: float
    prescription: Prescription = Prescription.MINUS
    symbol: PhaseSymbol | None = None
    hamiltonian: fock.FockOperator | None = None
    symmetric_rule: SymmetricRule = SymmetricRule.MIDPOINT

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}.")
        if self.mode == KernelMode.EXACT:
            if self.hamiltonian is None:
                raise ValueError("An exact kernel requires a Hamiltonian.")
            return
        if self.symbol is None:
            raise ValueError("A naive kernel requires a symbol.")
        if self.symbol.kind != self.prescription.symbol_kind:
            match = Prescription.for_kind(self.symbol.kind)
            raise KernelMismatchError(
                f"A {self.symbol.kind.value} symbol cannot be used with the "
                + f"{self.prescription.value} prescription; use "
                + f"{match.value}.",
            )

    @classmethod
    def exact(
        cls,
        hamiltonian: fock.FockOperator,
        beta: float,
        n_slices: int,
    ) -> Self:
        return cls(KernelMode.EXACT, beta / n_slices, hamiltonian=hamiltonian)

    @classmethod
    def naive(
        cls,
        symbol: PhaseSymbol,
        prescription: Prescription,
        beta: float,
        n_slices: int,
        symmetric_rule: SymmetricRule = SymmetricRule.MIDPOINT,
    ) -> Self:
        return cls(
            KernelMode.NAIVE,
            beta / n_slices,
            prescription=prescription,
            symbol=symbol,
            symmetric_rule=symmetric_rule,
        )

    def with_slices(self, beta: float, n_slices: int) -> Self:
        return dataclasses.replace(self, epsilon=beta / n_slices)


def propagator(hamiltonian: fock.FockOperator, epsilon: float) -> np.ndarray:
    """
    Returns
    -------
    np.ndarray
        e^{-epsilon H} on the truncated space.
    """
    if hamiltonian.is_diagonal():
        return np.diag(np.exp(-epsilon * hamiltonian.diagonal()))
    return scipy.linalg.expm(-epsilon * hamiltonian.matrix)


def exact_kernel(
    hamiltonian: fock.FockOperator,
    epsilon: float,
    z1: complex,
    z2: complex,
) -> complex:
    """
    Returns
    -------
    complex
        <z1|e^{-epsilon H}|z2> in the truncated Fock space of `hamiltonian`.
        A truncation warning is logged if either coherent state is not
        resolved.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}.")
    bra = fock.coherent_vector(z1, hamiltonian.dim)
    ket = fock.coherent_vector(z2, hamiltonian.dim)
    step = propagator(hamiltonian, epsilon)
    return complex(np.vdot(bra.vector, step @ ket.vector))


def _symbol_arguments(spec: KernelSpec, zbar1, z2):
    """
    The symbol of a naive kernel evaluated at the prescription's
    arguments, without its constant term.
    """
    s = spec.symbol.without_constant()
    zbar2 = np.conj(z2)
    if spec.prescription == Prescription.MINUS:
        return s.evaluate(zbar1, z2)
    if spec.prescription == Prescription.PLUS:
        return s.evaluate(zbar2, z2)
    if spec.symmetric_rule == SymmetricRule.AVERAGE:
        return 0.5 * (s.evaluate(zbar1, z2) + s.evaluate(zbar2, z2))
    return s.evaluate(0.5 * (zbar1 + zbar2), z2)


def naive_kernel(spec: KernelSpec, z1: complex, z2: complex) -> complex:
    """
    Returns
    -------
    complex
        exp(zbar1 z2 - |z1|^2/2 - |z2|^2/2 - epsilon s(args)) where the
        arguments of s are:
        - MINUS: (zbar1, z2)
        - PLUS: (zbar2, z2), the earlier slice
        - SYMMETRIC: ((zbar1 + zbar2)/2, z2) under SymmetricRule.MIDPOINT,
          or the mean of the MINUS and PLUS values under
          SymmetricRule.AVERAGE

    Raises
    ------
    ValueError
        If `spec` is not a NAIVE kernel.
    """
    if spec.mode != KernelMode.NAIVE:
        raise ValueError("naive_kernel requires a NAIVE KernelSpec.")
    zbar1 = np.conj(z1)
    action = _symbol_arguments(spec, zbar1, z2) + complex(spec.symbol.constant)
    exponent = zbar1 * z2 - 0.5 * abs(z1) ** 2 - 0.5 * abs(z2) ** 2
    return complex(np.exp(exponent - spec.epsilon * action))


def effective_operator(spec: KernelSpec) -> NormalPoly:
    """
    The operator A quantized by a naive kernel, so that Tr T^N tends to
    Tr e^{-beta A} as N grows on a grid that resolves the relevant states.

    MINUS kernels quantize their symbol in Wick order, PLUS kernels in
    anti-Wick order and the SYMMETRIC midpoint rule in Weyl order. The
    SYMMETRIC average rule gives the mean of the Wick and anti-Wick
    operators.

    Raises
    ------
    ValueError
        If `spec` is not a NAIVE kernel.
    """
    if spec.mode != KernelMode.NAIVE:
        raise ValueError("effective_operator requires a NAIVE KernelSpec.")
    s = spec.symbol
    if (
        spec.prescription == Prescription.SYMMETRIC
        and spec.symmetric_rule == SymmetricRule.AVERAGE
    ):
        wick = normal_poly(s.with_kind(SymbolKind.WICK))
        antiwick = normal_poly(s.with_kind(SymbolKind.ANTI_WICK))
        return (wick + antiwick) / 2
    return normal_poly(s)


def continuum_partition(spec: KernelSpec, beta: float, dim: int) -> float:
    """
    Returns
    -------
    float
        Tr e^{-beta A} for the effective operator A of `spec`, truncated to
        `dim` number states.

    Raises
    ------
    UnsupportedHamiltonianError
        If A is not diagonal in the number basis.
    """
    operator = effective_operator(spec).to_matrix(dim)
    return fock.exact_partition(operator, beta).value


class TransferMatrix(NamedTuple):
    """
    The similarity-symmetrized one-step kernel sqrt(w_p) K(zbar_p, z_q)
    sqrt(w_q) on a grid.

    The constant term of a naive symbol is kept out of `matrix`; each step
    contributes the scalar factor e^{-epsilon constant} instead.
    """

    matrix: np.ndarray
    epsilon: float
    constant: float

    def is_hermitian(self) -> bool:
        scale = np.max(np.abs(self.matrix))
        return np.allclose(
            self.matrix,
            self.matrix.conj().T,
            rtol=0,
            atol=1e-13 * scale,
        )

    def eigenvalues(self) -> np.ndarray:
        if self.is_hermitian():
            return scipy.linalg.eigvalsh(self.matrix)
        return scipy.linalg.eigvals(self.matrix)

    def trace_power(self, n_slices: int) -> complex:
        """
        Returns
        -------
        complex
            e^{-N epsilon constant} Tr T^N.
        """
        if not np.all(np.isfinite(self.matrix)):
            return complex("nan")
        with np.errstate(over="ignore"):
            powers = self.eigenvalues().astype(complex) ** n_slices
        shift = math.exp(-n_slices * self.epsilon * self.constant)
        return complex(np.sum(powers) * shift)


def _resolves(grid: QuadratureGrid, dim: int) -> bool:
    return grid.guarantees(dim - 1, dim - 1) and dim <= grid.angular_order


def thermal_dimension(spec: KernelSpec, beta: float, limit: int) -> int:
    """
    Estimate how many number states a naive kernel populates at `beta`.

    The level n is given the energy Re s(sqrt(n)) of the kernel's symbol;
    states whose Boltzmann weight relative to the lowest level is below
    machine precision are not counted.

    Returns
    -------
    int
        One more than the highest populated level below `limit`.
    """
    if spec.mode != KernelMode.NAIVE:
        raise ValueError("thermal_dimension requires a NAIVE KernelSpec.")
    levels = np.arange(max(int(limit), 1))
    energies = np.real(spec.symbol(np.sqrt(levels)))
    exponents = beta * (energies - np.min(energies))
    populated = np.flatnonzero(exponents <= THERMAL_WINDOW)
    return int(populated[-1]) + 1


def transfer_matrix(spec: KernelSpec, grid: QuadratureGrid) -> TransferMatrix:
    """
    Build the transfer matrix of `spec` on `grid`.

    Naive kernels are assembled in log space so that large nodes, whose
    raw weights overflow, stay representable.
    """
    nodes = grid.nodes
    if spec.mode == KernelMode.EXACT:
        dim = spec.hamiltonian.dim
        if not _resolves(grid, dim):
            log.warning(
                f"{grid!r} does not resolve the identity on D = {dim} "
                + "number states; the exact kernel will not compose "
                + "exactly.",
            )
        amplitudes = fock.coherent_amplitudes(nodes, dim)
        w = np.sqrt(grid.weights)[:, None] * amplitudes
        step = propagator(spec.hamiltonian, spec.epsilon)
        return TransferMatrix(w.conj() @ step @ w.T, spec.epsilon, 0.0)

    zbar1 = np.conj(nodes)[:, None]
    z2 = nodes[None, :]
    log_w = 0.5 * grid.log_weights
    exponent = zbar1 * z2 - spec.epsilon * _symbol_arguments(spec, zbar1, z2)
    exponent = exponent + log_w[:, None] + log_w[None, :]
    with np.errstate(over="ignore"):
        matrix = np.exp(exponent)
    constant = complex(spec.symbol.constant)
    if constant.imag != 0:
        raise ValueError("The constant term of a symbol must be real.")
    return TransferMatrix(matrix, spec.epsilon, constant.real)


class LatticeResult(NamedTuple):
    """
    A lattice partition function and the knobs it was computed with.

    `error_estimate` is the relative change |dZ|/Z of the last refinement
    step, or NaN for a single run.
    """

    value: float
    beta: float
    n_slices: int
    radial_order: int
    angular_order: int
    dim: int | None
    error_estimate: float
    imaginary_part: float


def lattice_partition(
    spec: KernelSpec,
    n_slices: int,
    grid: QuadratureGrid,
) -> LatticeResult:
    """
    Compute Z = Tr T^N for the transfer matrix of `spec` on `grid`.

    Parameters
    ----------
    spec: KernelSpec
        The one-step kernel; `spec.epsilon` times `n_slices` is beta.

    n_slices: int
        The number of time slices N >= 1.

    grid: QuadratureGrid
        The phase-space grid.

    Returns
    -------
    LatticeResult
        The real part of the trace. A warning is logged if the imaginary
        part exceeds 1e-10 relative or the value is not finite and
        positive, and for naive kernels if the grid does not resolve the
        identity on the populated number states.
    """
    if not isinstance(n_slices, (int, np.integer)) or n_slices < 1:
        raise ValueError(f"n_slices must be an integer >= 1, got {n_slices}.")
    if spec.mode == KernelMode.NAIVE:
        limit = int(2 * grid.max_abs2) + 1
        dim = thermal_dimension(spec, spec.epsilon * n_slices, limit)
        if not _resolves(grid, dim):
            log.warning(
                f"quadrature aliasing: {grid!r} does not resolve the "
                + f"{dim} populated number states of the naive kernel; "
                + "increase the angular order.",
            )
    z = transfer_matrix(spec, grid).trace_power(n_slices)
    value, imaginary = z.real, z.imag
    if not np.isfinite(value) or value <= 0:
        log.warning(
            f"lattice partition at N = {n_slices} is not finite and "
            + f"positive ({value:.6g}); the kernel is unstable on "
            + f"{grid!r}.",
        )
    elif abs(imaginary) > IMAGINARY_TOLERANCE * abs(value):
        log.warning(
            f"lattice partition at N = {n_slices} has imaginary part "
            + f"{imaginary:.3g} relative to {value:.6g}.",
        )
    dim = spec.hamiltonian.dim if spec.mode == KernelMode.EXACT else None
    return LatticeResult(
        float(value),
        spec.epsilon * n_slices,
        int(n_slices),
        grid.radial_order,
        grid.angular_order,
        dim,
        float("nan"),
        float(imaginary),
    )


class Refinement(NamedTuple):
    """
    The outcome of refine_partition.

    `history` holds one result per N, `quadrature_change` the relative
    change of Z when both grid orders were doubled at the final N.
    """

    result: LatticeResult
    history: list[LatticeResult]
    quadrature_change: float
    converged: bool


def _relative_change(new: float, old: float) -> float:
    if new == 0:
        return float("inf")
    return abs(new - old) / abs(new)


def refine_partition(
    spec: KernelSpec,
    beta: float,
    grid: QuadratureGrid,
    start_slices: int = 16,
    tolerance: float = REFINE_TOLERANCE,
    max_slices: int = MAX_SLICES,
) -> Refinement:
    """
    Double N until |dZ|/Z < `tolerance` or N reaches `max_slices`, then
    double the radial and angular orders once to confirm that the grid is
    saturated.

    A result that misses either criterion is returned with
    `converged=False` and a warning is logged; it is never silently
    accepted.
    """
    n = start_slices
    history = [lattice_partition(spec.with_slices(beta, n), n, grid)]
    change = float("inf")
    while n < max_slices:
        n *= 2
        current = lattice_partition(spec.with_slices(beta, n), n, grid)
        change = _relative_change(current.value, history[-1].value)
        history.append(current._replace(error_estimate=change))
        log.info(
            f"refine: N = {n}, Z = {current.value:.12g}, "
            + f"dZ/Z = {change:.3g}",
        )
        if change < tolerance:
            break
    result = history[-1]

    finer = build_grid(2 * grid.radial_order, 2 * grid.angular_order)
    confirm = lattice_partition(spec.with_slices(beta, n), n, finer)
    quadrature_change = _relative_change(confirm.value, result.value)
    log.info(
        f"refine: {finer!r} changes Z by {quadrature_change:.3g}",
    )

    converged = change < tolerance and quadrature_change < tolerance
    if not converged:
        log.warning(
            f"lattice partition not converged: dZ/Z = {change:.3g} at "
            + f"N = {n}, quadrature change {quadrature_change:.3g}.",
        )
    return Refinement(result, history, quadrature_change, converged)


def empirical_order(
    values: Sequence[float],
    reference: float | None = None,
) -> list[float]:
    """
    Estimate the convergence order from results at N, 2N, 4N, ...

    Parameters
    ----------
    values: Sequence[float]
        Results at successively doubled N.

    reference: float, optional
        The exact limit. Without it, successive differences are used.

    Returns
    -------
    list[float]
        One estimate per entry of `values`, NaN where there is not enough
        history. An order p means the error falls like N^{-p}.
    """
    values = [float(v) for v in values]
    if reference is not None:
        errors = [abs(v - reference) for v in values]
        offset = 1
    else:
        errors = [abs(b - a) for a, b in zip(values, values[1:])]
        offset = 2
    orders = [float("nan")] * min(offset, len(values))
    for previous, current in zip(errors, errors[1:]):
        if previous == 0 or current == 0:
            orders.append(float("nan"))
        else:
            orders.append(math.log2(previous / current))
    return orders


class AnomalyRow(NamedTuple):
    """
    One symbol choice at one N of the anomaly report.

    `ratio` is Z_lattice / Z_exact and `residual` is ratio minus
    `expected_ratio`.
    """

    label: str
    prescription: Prescription
    n_slices: int
    z_lattice: float
    z_exact: float
    ratio: float
    expected_ratio: float
    residual: float
    radial_order: int
    angular_order: int
    dim: int


class _Choice(NamedTuple):
    label: str
    mode: KernelMode
    prescription: Prescription
    payload: object
    expected_ratio: float


def anomaly_choices(
    beta: float,
    U: float,
    mu: float = 0.0,
    dim: int = DEFAULT_DIM,
    symmetric_rule: SymmetricRule = SymmetricRule.MIDPOINT,
) -> list[_Choice]:
    """
    The symbol choices compared by the anomaly report, in report order.

    The expected ratio of a naive choice is Tr e^{-beta A} / Z_exact for
    the operator A its kernel quantizes, the limit of Z_lattice / Z_exact
    as N grows.
    """
    op = bose_hubbard_poly(U, mu)
    hamiltonian = fock.bose_hubbard_hamiltonian(U, mu, dim)
    z_exact = fock.exact_partition(hamiltonian, beta).value

    def naive(label, prescription, symbol) -> _Choice:
        spec = KernelSpec.naive(symbol, prescription, beta, 1, symmetric_rule)
        limit = continuum_partition(spec, beta, dim) / z_exact
        return _Choice(label, KernelMode.NAIVE, prescription, symbol, limit)

    return [
        _Choice(
            "exact",
            KernelMode.EXACT,
            Prescription.MINUS,
            hamiltonian,
            1.0,
        ),
        naive("wick-naive", Prescription.MINUS, wick_symbol(op)),
        naive("weyl-correct", Prescription.SYMMETRIC, weyl_symbol(op)),
        naive(
            "weyl-linearized",
            Prescription.SYMMETRIC,
            linearized_weyl_bh(U, mu),
        ),
    ]


def anomaly_report(
    beta: float,
    U: float,
    slices: Sequence[int],
    grid: QuadratureGrid,
    mu: float = 0.0,
    dim: int = DEFAULT_DIM,
    symmetric_rule: SymmetricRule = SymmetricRule.MIDPOINT,
    workers: int | None = None,
    show_progress: bool = False,
) -> list[AnomalyRow]:
    """
    Compare lattice partition functions of the single-site Bose-Hubbard
    model built from different symbols against the exact trace.

    The rows for weyl-correct and weyl-linearized differ only in the
    constant term of their symbols, so their ratio is e^{beta U/8} at
    every N.

    Parameters
    ----------
    slices: Sequence[int]
        The values of N; rows are ordered by N, then by symbol choice.

    workers: int, optional
        Threads used for independent rows. Defaults to CSPI_NUM_THREADS.

    Returns
    -------
    list[AnomalyRow]
    """
    if not slices:
        raise ValueError("At least one value of N is required.")
    if workers is None:
        workers = util.thread_count()

    hamiltonian = fock.bose_hubbard_hamiltonian(U, mu, dim)
    z_exact = fock.exact_partition(hamiltonian, beta).value
    choices = anomaly_choices(beta, U, mu, dim, symmetric_rule)
    tasks = [(n, choice) for n in slices for choice in choices]

    def compute(task) -> AnomalyRow:
        n, choice = task
        if choice.mode == KernelMode.EXACT:
            spec = KernelSpec.exact(choice.payload, beta, n)
        else:
            spec = KernelSpec.naive(
                choice.payload,
                choice.prescription,
                beta,
                n,
                symmetric_rule,
            )
        z = lattice_partition(spec, n, grid).value
        ratio = z / z_exact
        return AnomalyRow(
            choice.label,
            choice.prescription,
            int(n),
            z,
            z_exact,
            ratio,
            choice.expected_ratio,
            ratio - choice.expected_ratio,
            grid.radial_order,
            grid.angular_order,
            dim,
        )

    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(
            tqdm(
                executor.map(compute, tasks),
                total=len(tasks),
                desc="Anomaly",
                unit=" row",
                leave=False,
                disable=not show_progress,
            ),
        )
    return rows


def anomaly_factors(rows: Sequence[AnomalyRow]) -> dict[int, float]:
    """
    Returns
    -------
    dict[int, float]
        Z(weyl-correct) / Z(weyl-linearized) for each N in `rows`.
    """
    by_key = {(row.n_slices, row.label): row.z_lattice for row in rows}
    factors = {}
    for n, label in by_key:
        if label != "weyl-correct" or (n, "weyl-linearized") not in by_key:
            continue
        factors[n] = by_key[(n, label)] / by_key[(n, "weyl-linearized")]
    return factors
