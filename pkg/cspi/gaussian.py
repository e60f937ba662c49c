# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains closed-form and lattice evaluations of the Gaussian coherent-state
path integral

    I_mu = int DzbarDz exp(-int_0^beta zbar (d_tau + mu) z dtau)

with periodic boundary conditions, for the three equal-time prescriptions
of the Green function G(tau) = [1/(e^{beta mu} - 1) + theta(tau)] e^{-mu tau}.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Self

import numpy as np
import scipy.linalg

from cspi import fock
from cspi.symbols import SymbolKind
from cspi.util import ConvergenceError

log = logging.getLogger(__name__)

# Largest lattice for which the dense LU cross-check is allowed.
MAX_DENSE_SLICES = 4096


class InvalidParameterError(ValueError):
    """
    Represents Gaussian parameters outside their domain.
    """


class EqualTimeError(ValueError):
    """
    Represents a Green function evaluated at coinciding times, where it is
    ambiguous without a prescription.
    """


class StepSizeError(ValueError):
    """
    Represents a lattice whose step eps * mu is not below 1.
    """


class Prescription(Enum):
    """
    The value theta(0) assigned to the step function at equal times.
    """

    MINUS = "minus"
    PLUS = "plus"
    SYMMETRIC = "symmetric"

    @property
    def theta0(self) -> float:
        return {
            Prescription.MINUS: 0.0,
            Prescription.PLUS: 1.0,
            Prescription.SYMMETRIC: 0.5,
        }[self]

    @property
    def symbol_kind(self) -> SymbolKind:
        """
        The symbol whose naive lattice discretization this prescription
        describes.
        """
        return {
            Prescription.MINUS: SymbolKind.WICK,
            Prescription.PLUS: SymbolKind.ANTI_WICK,
            Prescription.SYMMETRIC: SymbolKind.WEYL,
        }[self]

    @classmethod
    def from_name(cls, name: str) -> Self:
        aliases = {
            "minus": cls.MINUS,
            "covariant": cls.MINUS,
            "wick": cls.MINUS,
            "plus": cls.PLUS,
            "contravariant": cls.PLUS,
            "antiwick": cls.PLUS,
            "symmetric": cls.SYMMETRIC,
            "weyl": cls.SYMMETRIC,
        }
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"Unrecognized prescription '{name}'.")

    @classmethod
    def for_kind(cls, kind: SymbolKind) -> Self:
        for prescription in cls:
            if prescription.symbol_kind == kind:
                return prescription
        raise ValueError(f"No prescription for {kind}.")


@dataclass(frozen=True)
class GaussianParams:
    """
    Attributes
    ----------
    beta: float
        Inverse temperature.

    mu: float
        Chemical potential of the integral being evaluated.

    mu0: float, optional
        Reference chemical potential of the ratio I_mu / I_mu0.
    """

    beta: float
    mu: float
    mu0: float | None = None

    def __post_init__(self):
        for name in ["beta", "mu", "mu0"]:
            value = getattr(self, name)
            if value is None and name == "mu0":
                continue
            if not np.isfinite(value) or not value > 0:
                raise InvalidParameterError(
                    f"{name} must be a positive finite number, got {value}.",
                )

    def reference(self) -> Self:
        """
        Returns
        -------
        GaussianParams
            The parameters with mu replaced by mu0.
        """
        return GaussianParams(self.beta, self._require_mu0(), self.mu0)

    def _require_mu0(self) -> float:
        if self.mu0 is None:
            raise InvalidParameterError("A reference mu0 is required.")
        return self.mu0


def bose_factor(x):
    """
    Returns
    -------
    float or np.ndarray
        1 / (e^x - 1).
    """
    return 1.0 / np.expm1(x)


def green_function(tau1: float, tau2: float, p: GaussianParams) -> float:
    """
    Evaluate G(tau1 - tau2) = [1/(e^{beta mu} - 1) + theta(tau1 - tau2)]
    e^{-mu (tau1 - tau2)} for distinct times in [0, beta).

    Raises
    ------
    EqualTimeError
        If tau1 == tau2; use green_at_zero with a Prescription instead.

    InvalidParameterError
        If a time lies outside [0, beta).
    """
    for tau in [tau1, tau2]:
        if not 0 <= tau < p.beta:
            raise InvalidParameterError(
                f"Time {tau} lies outside [0, {p.beta}).",
            )
    if tau1 == tau2:
        raise EqualTimeError(
            "G is discontinuous at equal times; use green_at_zero with an "
            + "explicit prescription.",
        )
    delta = tau1 - tau2
    theta = 1.0 if delta > 0 else 0.0
    return float((bose_factor(p.beta * p.mu) + theta) * np.exp(-p.mu * delta))


def green_at_zero(prescription: Prescription, p: GaussianParams) -> float:
    """
    Returns
    -------
    float
        G(0) = 1/(e^{beta mu} - 1) + theta0(prescription).
    """
    return float(bose_factor(p.beta * p.mu) + prescription.theta0)


def ratio_closed(prescription: Prescription, p: GaussianParams) -> float:
    """
    Returns
    -------
    float
        I_mu / I_mu0 in closed form:
        (1 - e^{-beta mu0}) / (1 - e^{-beta mu}) e^{-theta0 beta (mu - mu0)}.

    Raises
    ------
    InvalidParameterError
        If `p` has no reference mu0.
    """
    mu0 = p._require_mu0()
    base = np.expm1(-p.beta * mu0) / np.expm1(-p.beta * p.mu)
    return float(base * np.exp(-prescription.theta0 * p.beta * (p.mu - mu0)))


def _trace_integral(
    prescription: Prescription,
    p: GaussianParams,
    quad_points: int,
) -> float:
    """
    Gauss-Legendre estimate of int_{mu0}^{mu} beta G(0; mu') dmu'.
    """
    mu0 = p._require_mu0()
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    half = 0.5 * (p.mu - mu0)
    middle = 0.5 * (p.mu + mu0)
    mus = middle + half * nodes
    integrand = p.beta * (bose_factor(p.beta * mus) + prescription.theta0)
    return float(half * np.dot(weights, integrand))


def ratio_by_integration(
    prescription: Prescription,
    p: GaussianParams,
    quad_points: int = 64,
    tolerance: float = 1e-12,
) -> float:
    """
    Evaluate I_mu / I_mu0 = exp(-int_{mu0}^{mu} tr G dmu') with
    tr G = beta G(0) by quadrature.

    The integral is repeated with twice the number of points; the finer
    value is used if the two agree to `tolerance` (relative).

    Raises
    ------
    InvalidParameterError
        If `quad_points` < 8 or `p` has no reference mu0.

    ConvergenceError
        If the refinement changes the integral by more than `tolerance`.
    """
    if quad_points < 8:
        raise InvalidParameterError("quad_points must be at least 8.")
    coarse = _trace_integral(prescription, p, quad_points)
    fine = _trace_integral(prescription, p, 2 * quad_points)
    change = abs(fine - coarse)
    if change > tolerance * max(1.0, abs(fine)):
        raise ConvergenceError(
            f"trace integral changed by {change:.3g} between {quad_points} "
            + f"and {2 * quad_points} points.",
        )
    return float(np.exp(-fine))


def _step(p: GaussianParams, n_slices: int) -> float:
    if n_slices < 2:
        raise InvalidParameterError("A lattice needs at least 2 slices.")
    x = p.beta * p.mu / n_slices
    if x >= 1:
        raise StepSizeError(
            f"eps * mu = {x:.6g} must be below 1; use more slices.",
        )
    return x


def lattice_kernel(
    prescription: Prescription,
    p: GaussianParams,
    n_slices: int,
) -> np.ndarray:
    """
    Build the N x N periodic first-order difference kernel.

    Row k pairs zbar_k with z_k (diagonal) and with z_{k-1} (cyclic
    subdiagonal):
    - MINUS:     1,            -(1 - eps mu)
    - PLUS:      1 + eps mu,   -1
    - SYMMETRIC: 1 + eps mu/2, -(1 - eps mu/2)

    Raises
    ------
    StepSizeError
        If eps * mu >= 1.
    """
    x = _step(p, n_slices)
    diagonal, lower = {
        Prescription.MINUS: (1.0, -(1.0 - x)),
        Prescription.PLUS: (1.0 + x, -1.0),
        Prescription.SYMMETRIC: (1.0 + 0.5 * x, -(1.0 - 0.5 * x)),
    }[prescription]
    shift = np.roll(np.eye(n_slices), 1, axis=0)
    return diagonal * np.eye(n_slices) + lower * shift


class LatticeDeterminant(NamedTuple):
    """
    A lattice determinant and its continuum target.

    `normalization` is (1 + eps mu)^N for PLUS and 1 otherwise; `value` is
    always the raw determinant.
    """

    prescription: Prescription
    n_slices: int
    value: float
    limit: float
    normalization: float
    method: str

    @property
    def normalized(self) -> float:
        return self.value / self.normalization

    @property
    def error(self) -> float:
        return abs(self.value - self.limit)

    @property
    def relative_error(self) -> float:
        return self.error / abs(self.limit)


def _closed_determinant(
    prescription: Prescription,
    p: GaussianParams,
    n_slices: int,
) -> tuple[float, float, float]:
    x = _step(p, n_slices)
    bm = p.beta * p.mu
    if prescription == Prescription.MINUS:
        value = -np.expm1(n_slices * np.log1p(-x))
        return value, -np.expm1(-bm), 1.0
    if prescription == Prescription.PLUS:
        log_norm = n_slices * np.log1p(x)
        return np.expm1(log_norm), np.expm1(bm), np.exp(log_norm)
    value = np.exp(n_slices * np.log1p(0.5 * x))
    value -= np.exp(n_slices * np.log1p(-0.5 * x))
    return value, 2.0 * np.sinh(0.5 * bm), 1.0


def dense_determinant(matrix: np.ndarray) -> float:
    """
    Returns
    -------
    float
        det(matrix) from a dense LU factorization with partial pivoting.
    """
    lu, piv = scipy.linalg.lu_factor(matrix)
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    sign = -1.0 if swaps % 2 else 1.0
    return float(sign * np.prod(np.diag(lu)))


def lattice_determinant(
    prescription: Prescription,
    p: GaussianParams,
    n_slices: int,
    method: str = "closed",
) -> LatticeDeterminant:
    """
    Compute the determinant of `lattice_kernel(prescription, p, n_slices)`.

    Continuum targets: MINUS 1 - e^{-beta mu}; PLUS e^{beta mu} - 1;
    SYMMETRIC e^{beta mu/2} - e^{-beta mu/2}. Their ratios at mu0 and mu
    reproduce `ratio_closed`.

    Parameters
    ----------
    method: {'closed', 'lu'}
        Evaluate the product formula, or factorize the explicit matrix
        (N <= 4096 only).

    Raises
    ------
    StepSizeError
        If eps * mu >= 1.

    InvalidParameterError
        If `method` is unknown, or 'lu' is requested beyond 4096 slices.
    """
    value, limit, normalization = _closed_determinant(
        prescription,
        p,
        n_slices,
    )
    if method == "lu":
        if n_slices > MAX_DENSE_SLICES:
            raise InvalidParameterError(
                f"Dense determinants are limited to {MAX_DENSE_SLICES} "
                + "slices.",
            )
        value = dense_determinant(lattice_kernel(prescription, p, n_slices))
    elif method != "closed":
        raise InvalidParameterError(f"Unknown determinant method '{method}'.")
    return LatticeDeterminant(
        prescription,
        n_slices,
        float(value),
        float(limit),
        float(normalization),
        method,
    )


def lattice_ratio(
    prescription: Prescription,
    p: GaussianParams,
    n_slices: int,
) -> float:
    """
    Returns
    -------
    float
        The lattice estimate det(mu0) / det(mu) of I_mu / I_mu0.
    """
    numerator = lattice_determinant(prescription, p.reference(), n_slices)
    denominator = lattice_determinant(prescription, p, n_slices)
    return numerator.value / denominator.value


def error_ratios(determinants: list[LatticeDeterminant]) -> list[float]:
    """
    Returns
    -------
    list[float]
        error(N_{i-1}) / error(N_i) for consecutive entries, NaN for the
        first. Close to 2 per doubling of N for first-order convergence.
    """
    ratios = [float("nan")]
    for previous, current in zip(determinants, determinants[1:]):
        if current.error == 0:
            ratios.append(float("nan"))
        else:
            ratios.append(previous.error / current.error)
    return ratios


def lattice_green(
    prescription: Prescription,
    p: GaussianParams,
    n_slices: int,
) -> np.ndarray:
    """
    Returns
    -------
    np.ndarray
        The inverse of the lattice kernel, i.e. the discrete correlator
        <z_l zbar_k> at entry (l, k).
    """
    return scipy.linalg.inv(lattice_kernel(prescription, p, n_slices))


def thermal_correlator(tau: float, p: GaussianParams, dim: int = 60):
    """
    Evaluate the imaginary-time correlator of H = mu n in the truncated
    Fock space:
    - tau > 0: Tr(e^{-(beta - tau) H} b e^{-tau H} b^dagger) / Z
    - tau < 0: Tr(e^{-(beta - |tau|) H} b^dagger e^{-|tau| H} b) / Z

    This is an independent oracle for `green_function`.
    """
    if tau == 0 or not abs(tau) < p.beta:
        raise InvalidParameterError("tau must satisfy 0 < |tau| < beta.")
    b, bd = fock.build_ladder(dim)
    energies = p.mu * np.arange(dim)

    def propagator(t):
        return np.diag(np.exp(-t * energies))

    if tau > 0:
        first, second = b.matrix, bd.matrix
    else:
        first, second = bd.matrix, b.matrix
    s = abs(tau)
    product = propagator(p.beta - s) @ first @ propagator(s) @ second
    z = fock.exact_partition(fock.diagonal_operator(energies), p.beta)
    return float(np.trace(product).real / z.value)


def ordered_trace_ratio(
    prescription: Prescription,
    p: GaussianParams,
    dim: int = 80,
) -> float:
    """
    Returns
    -------
    float
        Z(mu) / Z(mu0) with Z(mu) = Tr e^{-beta mu (n + theta0)}, the
        operator counterpart of `ratio_closed`.
    """
    levels = np.arange(dim) + prescription.theta0

    def partition(mu):
        hamiltonian = fock.diagonal_operator(mu * levels)
        return fock.exact_partition(hamiltonian, p.beta).value

    return partition(p.mu) / partition(p._require_mu0())
