# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains the truncated Fock-space operator algebra of a single bosonic
mode, boson coherent states, and the exact partition-function oracle that
every path-integral result is compared against.
"""

import logging
import math
from typing import NamedTuple, Self

import numpy as np
from scipy import special

log = logging.getLogger(__name__)

# Tail tolerance above which coherent-state truncation is reported.
TRUNCATION_TOLERANCE = 1e-10


class DimensionError(ValueError):
    """
    Represents an invalid truncation dimension.
    """


class UnsupportedHamiltonianError(ValueError):
    """
    Represents a Hamiltonian that is not diagonal in the number basis.
    """


class UnboundedSpectrumError(ArithmeticError):
    """
    Represents a spectrum too negative for e^{-beta E} to be finite.
    """


class FockOperator:
    """
    A dense operator on the truncated number basis {|0>, ..., |D-1>}.

    Attributes
    ----------
    matrix: np.ndarray
        The D x D complex matrix; row and column index equal the boson
        number.
    """

    def __init__(self, matrix):
        """
        Raises
        ------
        DimensionError
            If `matrix` is not square.
        """
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError("FockOperator requires a square matrix.")
        matrix.flags.writeable = False
        self._matrix = matrix

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __repr__(self):
        return f"FockOperator(dim={self.dim})"

    def __matmul__(self, other: Self) -> Self:
        return FockOperator(self._matrix @ other.matrix)

    def __add__(self, other: Self) -> Self:
        return FockOperator(self._matrix + other.matrix)

    def __sub__(self, other: Self) -> Self:
        return FockOperator(self._matrix - other.matrix)

    def __mul__(self, scalar: complex) -> Self:
        return FockOperator(scalar * self._matrix)

    __rmul__ = __mul__

    def dagger(self) -> Self:
        return FockOperator(self._matrix.conj().T)

    def is_diagonal(self) -> bool:
        off = self._matrix - np.diag(np.diag(self._matrix))
        return not np.any(off)

    def diagonal(self) -> np.ndarray:
        return np.diag(self._matrix).copy()

    def is_hermitian(self, atol: float = 0.0) -> bool:
        return np.allclose(self._matrix, self._matrix.conj().T, atol=atol)


def _check_dimension(dim: int, minimum: int = 2):
    if not isinstance(dim, (int, np.integer)) or dim < minimum:
        raise DimensionError(
            f"Truncation dimension must be an integer >= {minimum}, "
            + f"got {dim!r}.",
        )


def build_ladder(dim: int) -> tuple[FockOperator, FockOperator]:
    """
    Parameters
    ----------
    dim: int
        The truncation dimension D.

    Returns
    -------
    tuple[FockOperator, FockOperator]
        The annihilation operator b, with <n-1|b|n> = sqrt(n), and its
        adjoint b^dagger.

    Raises
    ------
    DimensionError
        If `dim` < 2.
    """
    _check_dimension(dim)
    b = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    annihilator = FockOperator(b)
    return annihilator, annihilator.dagger()


def number_operator(dim: int) -> FockOperator:
    """
    Returns
    -------
    FockOperator
        n = b^dagger b, diagonal with entries 0, 1, ..., D-1.
    """
    _check_dimension(dim)
    return FockOperator(np.diag(np.arange(dim, dtype=float)))


def diagonal_operator(energies) -> FockOperator:
    """
    Returns
    -------
    FockOperator
        The operator sum_n energies[n] |n><n|.
    """
    energies = np.asarray(energies, dtype=float)
    _check_dimension(len(energies), minimum=1)
    return FockOperator(np.diag(energies))


def bose_hubbard_hamiltonian(U: float, mu: float, dim: int) -> FockOperator:
    """
    Single-site Bose-Hubbard Hamiltonian (U/2) n (n - 1) - mu n.

    Raises
    ------
    DimensionError
        If `dim` < 2.
    """
    _check_dimension(dim)
    n = np.arange(dim, dtype=float)
    return diagonal_operator(0.5 * U * n * (n - 1) - mu * n)


class PartitionResult(NamedTuple):
    """
    The value of a truncated trace and the magnitude of its last term,
    which bounds the truncation error for decaying spectra.
    """

    value: float
    last_term: float


def exact_partition(hamiltonian: FockOperator, beta: float) -> PartitionResult:
    """
    Compute Tr e^{-beta H} on the truncated space.

    Parameters
    ----------
    hamiltonian: FockOperator
        A Hamiltonian diagonal in the number basis.

    beta: float
        The inverse temperature, > 0.

    Returns
    -------
    PartitionResult
        sum_{n<D} e^{-beta E_n} and the size of the n = D-1 term.

    Raises
    ------
    UnsupportedHamiltonianError
        If `hamiltonian` is not diagonal.

    ValueError
        If `beta` is not positive.

    UnboundedSpectrumError
        If some e^{-beta E_n} overflows.
    """
    if not hamiltonian.is_diagonal():
        raise UnsupportedHamiltonianError(
            "The partition oracle only supports number-diagonal "
            + "Hamiltonians.",
        )
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}.")

    energies = hamiltonian.diagonal().real
    exponents = -beta * energies
    if np.max(exponents) >= np.log(np.finfo(float).max):
        raise UnboundedSpectrumError(
            "e^{-beta E} overflows: the spectrum is unbounded below "
            + "at this truncation.",
        )

    terms = np.exp(exponents)
    # Accumulate from the smallest term up.
    value = math.fsum(np.sort(terms))
    return PartitionResult(value, float(terms[-1]))


def default_dimension(abs2_max: float) -> int:
    """
    Returns
    -------
    int
        The truncation ceil(x + 10 sqrt(x) + 20) with x = |z|^2_max, which
        keeps the Poisson tail of every coherent state with |z|^2 <= x far
        below double precision.
    """
    if abs2_max < 0:
        raise ValueError("|z|^2 must be non-negative.")
    return math.ceil(abs2_max + 10 * math.sqrt(abs2_max) + 20)


def poisson_tail(abs2: float, dim: int) -> float:
    """
    Returns
    -------
    float
        The probability weight 1 - <z|P_D|z> that a coherent state with
        |z|^2 = abs2 carries outside the first `dim` number states.
    """
    if abs2 == 0:
        return 0.0
    return float(special.gammainc(dim, abs2))


def coherent_amplitudes(z, dim: int) -> np.ndarray:
    """
    Returns
    -------
    np.ndarray
        z^n / sqrt(n!) for n < dim, without the e^{-|z|^2/2} prefactor.
        `z` may be an array, in which case the result has shape
        z.shape + (dim,).
    """
    z = np.asarray(z, dtype=complex)
    amplitudes = np.empty(z.shape + (dim,), dtype=complex)
    amplitudes[..., 0] = 1.0
    for n in range(1, dim):
        amplitudes[..., n] = amplitudes[..., n - 1] * z / np.sqrt(n)
    return amplitudes


class CoherentVector:
    """
    The truncated coherent state |z> = e^{-|z|^2/2} sum_n z^n/sqrt(n!) |n>.
    """

    def __init__(self, z: complex, vector: np.ndarray):
        self.z = complex(z)
        vector = np.array(vector, dtype=complex)
        vector.flags.writeable = False
        self.vector = vector

    @property
    def dim(self) -> int:
        return len(self.vector)

    def __repr__(self):
        return f"CoherentVector(z={self.z!r}, dim={self.dim})"

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def overlap(self, other: Self) -> complex:
        """
        Returns
        -------
        complex
            <self|other>.
        """
        return complex(np.vdot(self.vector, other.vector))

    def expectation(self, op: FockOperator) -> complex:
        """
        Returns
        -------
        complex
            <z|op|z>.
        """
        if op.dim != self.dim:
            raise DimensionError(
                f"Operator dimension {op.dim} does not match "
                + f"state dimension {self.dim}.",
            )
        return complex(np.vdot(self.vector, op.matrix @ self.vector))


def coherent_vector(
    z: complex,
    dim: int,
    tolerance: float = TRUNCATION_TOLERANCE,
) -> CoherentVector:
    """
    Build the truncated coherent state |z>.

    A warning is logged when the Poisson tail lost to truncation exceeds
    `tolerance`.

    Raises
    ------
    DimensionError
        If `dim` < 1.
    """
    _check_dimension(dim, minimum=1)
    abs2 = abs(z) ** 2
    tail = poisson_tail(abs2, dim)
    if tail > tolerance:
        log.warning(
            f"coherent state truncation: |z|^2 = {abs2:.6g} loses weight "
            + f"{tail:.3g} at D = {dim} (suggested D >= "
            + f"{default_dimension(abs2)}).",
        )
    vector = np.exp(-0.5 * abs2) * coherent_amplitudes(z, dim)
    return CoherentVector(z, vector)
