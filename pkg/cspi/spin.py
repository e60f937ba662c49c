# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains SU(2) spin matrices, spin coherent states in the stereographic
parametrization, and their covariant symbols.
"""

import functools
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
import sympy
from scipy import special

log = logging.getLogger(__name__)


class SpinError(ValueError):
    """
    Represents an invalid spin, label or operator dimension.
    """


def spin_value(s) -> sympy.Rational:
    """
    Returns
    -------
    sympy.Rational
        `s` as an exact half-integer.

    Raises
    ------
    SpinError
        If `s` is not a positive multiple of 1/2.
    """
    try:
        value = sympy.Rational(s)
    except (TypeError, ValueError):
        raise SpinError(f"Invalid spin '{s}'.")
    if value <= 0 or not (2 * value).is_integer:
        raise SpinError(f"Spin must be a positive half-integer, got {s}.")
    return value


@dataclass(frozen=True, eq=False)
class SpinRep:
    """
    The spin-s representation in the basis |s, m>, m = s, s-1, ..., -s.

    Attributes
    ----------
    s: sympy.Rational
        The spin.

    sz, splus, sminus: np.ndarray
        S_z, S_+ and S_- as floating-point matrices.
    """

    s: sympy.Rational
    sz: np.ndarray
    splus: np.ndarray
    sminus: np.ndarray

    @property
    def dim(self) -> int:
        return int(2 * self.s + 1)

    def exact_matrices(self) -> tuple[sympy.Matrix, ...]:
        """
        Returns
        -------
        tuple[sympy.Matrix, sympy.Matrix, sympy.Matrix]
            S_z, S_+ and S_- with exact entries.
        """
        s = self.s
        ms = [s - k for k in range(self.dim)]
        sz = sympy.diag(*ms)
        splus = sympy.zeros(self.dim, self.dim)
        for k in range(1, self.dim):
            m = ms[k]
            splus[k - 1, k] = sympy.sqrt(s * (s + 1) - m * (m + 1))
        return sz, splus, splus.T

    def check_algebra(self) -> bool:
        """
        Verify [S_+, S_-] = 2 S_z, [S_z, S_+-] = +-S_+- and
        S^2 = s(s+1) in exact arithmetic.

        Raises
        ------
        SpinError
            If any relation fails.
        """
        sz, sp, sm = self.exact_matrices()
        casimir = sz * sz + (sp * sm + sm * sp) / 2
        relations = {
            "[S+, S-] = 2 Sz": sp * sm - sm * sp - 2 * sz,
            "[Sz, S+] = S+": sz * sp - sp * sz - sp,
            "[Sz, S-] = -S-": sz * sm - sm * sz + sm,
            "S^2 = s(s+1)": casimir
            - self.s * (self.s + 1) * sympy.eye(self.dim),
        }
        for name, residual in relations.items():
            if not residual.applyfunc(sympy.simplify).is_zero_matrix:
                raise SpinError(f"spin {self.s}: {name} does not hold.")
        return True


@functools.cache
def _spin_rep(s: sympy.Rational) -> SpinRep:
    dim = int(2 * s + 1)
    m = float(s) - np.arange(dim)
    sz = np.diag(m)
    casimir = float(s * (s + 1))
    splus = np.diag(np.sqrt(casimir - m[1:] * (m[1:] + 1)), k=1)
    for matrix in [sz, splus]:
        matrix.flags.writeable = False
    sminus = splus.T
    return SpinRep(s, sz, splus, sminus)


def spin_rep(s) -> SpinRep:
    """
    Raises
    ------
    SpinError
        If `s` is not a positive half-integer.
    """
    return _spin_rep(spin_value(s))


class SpinCoherent(NamedTuple):
    """
    The normalized state proportional to e^{z S_-} |s, s>.
    """

    z: complex
    vector: np.ndarray


def _check_label(z):
    if not np.isfinite(z):
        raise SpinError(f"Stereographic label must be finite, got {z}.")


def spin_coherent(z: complex, s) -> SpinCoherent:
    """
    Build the spin coherent state from the matrix exponential of z S_-.
    """
    _check_label(z)
    rep = spin_rep(s)
    highest = np.zeros(rep.dim, dtype=complex)
    highest[0] = 1.0
    vector = scipy.linalg.expm(complex(z) * rep.sminus) @ highest
    return SpinCoherent(complex(z), vector / np.linalg.norm(vector))


def coherent_closed_form(z: complex, s) -> np.ndarray:
    """
    Returns
    -------
    np.ndarray
        Components sqrt(C(2s, k)) z^k / (1 + |z|^2)^s, k = 0, ..., 2s.
    """
    _check_label(z)
    two_s = int(2 * spin_value(s))
    k = np.arange(two_s + 1)
    binomials = special.comb(two_s, k, exact=False)
    norm = (1 + abs(z) ** 2) ** (0.5 * two_s)
    return np.sqrt(binomials) * complex(z) ** k / norm


def spin_cov_symbol(op, s, z: complex) -> complex:
    """
    Returns
    -------
    complex
        The covariant symbol <z|op|z> of `op` in spin `s`.

    Raises
    ------
    SpinError
        If `op` does not act on the 2s+1 dimensional space.
    """
    op = np.asarray(op)
    rep = spin_rep(s)
    if op.shape != (rep.dim, rep.dim):
        raise SpinError(
            f"Operator of shape {op.shape} does not act on spin {rep.s} "
            + f"(dimension {rep.dim}).",
        )
    state = spin_coherent(z, s).vector
    return complex(np.vdot(state, op @ state))


def sz_symbol_closed_form(s, z: complex) -> float:
    """
    s (1 - |z|^2) / (1 + |z|^2).
    """
    s = float(spin_value(s))
    a = abs(z) ** 2
    return s * (1 - a) / (1 + a)


def product_symbol_gap(s, z: complex) -> float:
    """
    Compute (S_z^2)_cov - ((S_z)_cov)^2 from the matrices.

    The gap is the variance of S_z in the coherent state, so it is zero
    only at the poles.
    """
    sz = spin_rep(s).sz
    square = spin_cov_symbol(sz @ sz, s, z).real
    mean = spin_cov_symbol(sz, s, z).real
    return float(square - mean**2)


def gap_closed_form(s, z: complex) -> float:
    """
    2s |z|^2 / (1 + |z|^2)^2.
    """
    s = float(spin_value(s))
    a = abs(z) ** 2
    return 2 * s * a / (1 + a) ** 2


class GapRow(NamedTuple):
    s: sympy.Rational
    z: float
    gap: float
    closed_form: float

    @property
    def deviation(self) -> float:
        return abs(self.gap - self.closed_form)


def gap_grid(spins, moduli) -> list[GapRow]:
    """
    Tabulate product_symbol_gap against its closed form.

    The gap depends on |z| only, so `moduli` are real labels.
    """
    rows = []
    for s in spins:
        s = spin_value(s)
        for z in moduli:
            gap = product_symbol_gap(s, z)
            rows.append(GapRow(s, float(z), gap, gap_closed_form(s, z)))
    log.debug(f"spin gap grid: {len(rows)} points")
    return rows
