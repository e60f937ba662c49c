# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains the phase-space quadrature that realizes the coherent-state
resolution of identity, int d^2z/pi |z><z| = 1, on a finite grid.

Nodes are z = sqrt(t_i) e^{2 pi i a / Q_a} with t_i the Gauss-Laguerre
abscissae. The e^{-|z|^2} factor carried by a pair of coherent-state
overlaps is the Laguerre weight function, so it is absorbed into the node
weights and every kernel evaluated on the grid is stripped of it.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from cspi import fock

log = logging.getLogger(__name__)


class QuadratureError(ArithmeticError):
    """
    Represents a failure to construct usable quadrature nodes or weights.
    """


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """
    Attributes
    ----------
    radial_order: int
        Number of Gauss-Laguerre nodes Q_r.

    angular_order: int
        Number of equally spaced phases Q_a.

    nodes: np.ndarray
        The Q_r * Q_a complex nodes, radial index outermost.

    weights: np.ndarray
        Positive weights w_i / Q_a, to be applied to kernels stripped of
        their e^{-|z|^2} factors.
    """

    radial_order: int
    angular_order: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def log_weights(self) -> np.ndarray:
        return np.log(self.weights)

    @property
    def max_abs2(self) -> float:
        """
        The largest |z|^2 on the grid.
        """
        return float(np.max(np.abs(self.nodes) ** 2))

    def guarantees(self, m: int, n: int) -> bool:
        """
        Returns
        -------
        bool
            True if the grid integrates <m|z><z|n> exactly.
        """
        limit = 2 * self.radial_order - 1
        return m <= limit and n <= limit and abs(m - n) < self.angular_order

    def __repr__(self):
        return (
            f"QuadratureGrid(radial_order={self.radial_order}, "
            + f"angular_order={self.angular_order})"
        )


def build_grid(radial_order: int, angular_order: int) -> QuadratureGrid:
    """
    Parameters
    ----------
    radial_order: int
        Q_r >= 2.

    angular_order: int
        Q_a >= 2.

    Returns
    -------
    QuadratureGrid
        A grid resolving the identity exactly for all <m|...|n> with
        m, n <= 2 Q_r - 1 and |m - n| < Q_a.

    Raises
    ------
    ValueError
        If either order is below 2.

    QuadratureError
        If the Laguerre nodes or weights are not finite and positive.
    """
    for name, order in [("radial", radial_order), ("angular", angular_order)]:
        if not isinstance(order, (int, np.integer)) or order < 2:
            raise ValueError(f"The {name} order must be an integer >= 2.")

    t, w = special.roots_laguerre(radial_order)
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(w))):
        raise QuadratureError(
            f"Gauss-Laguerre rule of order {radial_order} is not finite.",
        )
    if np.any(w <= 0) or np.any(t <= 0):
        raise QuadratureError(
            f"Gauss-Laguerre rule of order {radial_order} underflows; "
            + "reduce the radial order.",
        )

    phases = np.exp(2j * np.pi * np.arange(angular_order) / angular_order)
    nodes = np.outer(np.sqrt(t), phases).ravel()
    weights = np.repeat(w / angular_order, angular_order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    log.debug(
        f"quadrature grid: Q_r = {radial_order}, Q_a = {angular_order}, "
        + f"max |z|^2 = {t[-1]:.6g}",
    )
    return QuadratureGrid(radial_order, angular_order, nodes, weights)


def identity_matrix(grid: QuadratureGrid, dim: int) -> np.ndarray:
    """
    Returns
    -------
    np.ndarray
        R with R[m, n] = sum_p w_p z_p^m zbar_p^n / sqrt(m! n!), the
        quadrature estimate of <m|n> for m, n < dim.
    """
    amplitudes = fock.coherent_amplitudes(grid.nodes, dim)
    return amplitudes.T @ (grid.weights[:, None] * amplitudes.conj())


class IdentityCheck(NamedTuple):
    """
    The resolution-of-identity diagnostics of a grid.

    `max_deviation` is taken over the pairs the grid guarantees; `aliased`
    lists the other pairs whose deviation exceeds the tolerance.
    """

    grid: QuadratureGrid
    dim: int
    max_deviation: float
    aliased: list[tuple[int, int, float]]


def identity_deviation(grid: QuadratureGrid, dim: int) -> np.ndarray:
    """
    Returns
    -------
    np.ndarray
        |R - 1| for the first `dim` number states.
    """
    return np.abs(identity_matrix(grid, dim) - np.eye(dim))


def aliased_pairs(
    grid: QuadratureGrid,
    dim: int,
    tolerance: float = 1e-12,
) -> list[tuple[int, int, float]]:
    """
    Returns
    -------
    list[tuple[int, int, float]]
        (m, n, deviation) for each pair outside the guaranteed range whose
        deviation from the identity exceeds `tolerance`, with m <= n.
    """
    deviation = identity_deviation(grid, dim)
    pairs = []
    for m in range(dim):
        for n in range(m, dim):
            if grid.guarantees(m, n):
                continue
            if deviation[m, n] > tolerance:
                pairs.append((m, n, float(deviation[m, n])))
    return pairs


def check_identity(
    grid: QuadratureGrid,
    dim: int,
    tolerance: float = 1e-12,
) -> IdentityCheck:
    """
    Measure the resolution-of-identity deviation for m, n < `dim`.

    A warning is logged if any pair outside the guaranteed range is
    aliased.
    """
    deviation = identity_deviation(grid, dim)
    guaranteed = [
        deviation[m, n]
        for m in range(dim)
        for n in range(dim)
        if grid.guarantees(m, n)
    ]
    max_deviation = float(max(guaranteed, default=0.0))
    aliased = aliased_pairs(grid, dim, tolerance)
    if aliased:
        m, n, worst = max(aliased, key=lambda pair: pair[2])
        log.warning(
            f"quadrature aliasing: {len(aliased)} pair(s) outside the "
            + f"exact range of {grid!r}, worst (m, n) = ({m}, {n}) with "
            + f"deviation {worst:.3g}.",
        )
    return IdentityCheck(grid, dim, max_deviation, aliased)
