# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Contains the exact polynomial calculus of operator orderings and
phase-space symbols of a single bosonic mode:
- NormalPoly, normal-ordered polynomials in b^dagger and b
- PhaseSymbol, polynomials in zbar and z tagged with a symbol kind
- The Laplacian Delta = d^2/(dzbar dz) and the e^{alpha Delta} transforms
  between Wick (covariant), anti-Wick (contravariant) and Weyl symbols

All coefficients are exact sympy numbers; floating point only appears when
an operator is materialized as a matrix or a symbol is evaluated at a point.
"""

import functools
import logging
import math
from collections.abc import Mapping, Sequence
from enum import Enum
from typing import Self

import numpy as np
import sympy

from cspi import fock

log = logging.getLogger(__name__)

Monomial = tuple[int, int]


class SymbolKindError(ValueError):
    """
    Represents arithmetic between symbols of different kinds.
    """


class SymbolKind(Enum):
    """
    The phase-space symbol of an operator, named after the ordering it is
    associated with. `shift` is the alpha with wick = e^{alpha Delta} s.
    """

    WICK = "wick"
    ANTI_WICK = "antiwick"
    WEYL = "weyl"

    @property
    def shift(self) -> sympy.Rational:
        return {
            SymbolKind.WICK: sympy.Integer(0),
            SymbolKind.ANTI_WICK: sympy.Integer(1),
            SymbolKind.WEYL: sympy.Rational(1, 2),
        }[self]

    @classmethod
    def from_name(cls, name: str) -> Self:
        aliases = {
            "wick": cls.WICK,
            "covariant": cls.WICK,
            "normal": cls.WICK,
            "antiwick": cls.ANTI_WICK,
            "anti-wick": cls.ANTI_WICK,
            "contravariant": cls.ANTI_WICK,
            "weyl": cls.WEYL,
            "symmetric": cls.WEYL,
        }
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"Unrecognized symbol kind '{name}'.")


def exact(value) -> sympy.Expr:
    """
    Convert a number to an exact sympy number.

    Floats are converted through their shortest decimal representation,
    so 0.1 becomes 1/10.

    Raises
    ------
    TypeError
        If `value` is not a number.
    """
    if isinstance(value, bool):
        raise TypeError("Booleans are not coefficients.")
    if isinstance(value, (complex, np.complexfloating)):
        return exact(value.real) + sympy.I * exact(value.imag)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise TypeError(f"Coefficient {value} is not finite.")
        return sympy.Rational(repr(float(value)))
    result = sympy.sympify(value)
    if not result.is_number or result.has(sympy.Float):
        raise TypeError(f"{value!r} is not an exact number.")
    return result


def _format_coefficient(c: sympy.Expr) -> tuple[str, str]:
    """
    Split a coefficient into a sign and a printable magnitude.
    """
    if c.is_real:
        if c < 0:
            return "-", str(-c)
        return "+", str(c)
    return "+", f"({c})"


def _format_terms(terms: list[tuple[sympy.Expr, str]]) -> str:
    if not terms:
        return "0"
    pieces = []
    for i, (c, monomial) in enumerate(terms):
        sign, magnitude = _format_coefficient(c)
        if monomial == "":
            body = magnitude
        elif magnitude == "1":
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"
        if i == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces)


def _power(base: str, exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return base
    return f"{base}^{exponent}"


class _CoefficientMap:
    """
    A canonical map from monomials (j, k) to exact non-zero coefficients.
    """

    def __init__(self, coeffs: Mapping[Monomial, object] | None = None):
        canonical = {}
        for (j, k), c in (coeffs or {}).items():
            if int(j) != j or int(k) != k or j < 0 or k < 0:
                raise ValueError(f"Invalid monomial ({j}, {k}).")
            c = sympy.expand(exact(c))
            if c != 0:
                canonical[(int(j), int(k))] = c
        self._coeffs = canonical

    @property
    def coeffs(self) -> dict[Monomial, sympy.Expr]:
        return dict(self._coeffs)

    def coefficient(self, j: int, k: int) -> sympy.Expr:
        return self._coeffs.get((j, k), sympy.Integer(0))

    def items(self):
        return sorted(
            self._coeffs.items(),
            key=lambda item: (-(item[0][0] + item[0][1]), -item[0][0]),
        )

    @property
    def degree(self) -> int:
        if not self._coeffs:
            return 0
        return max(j + k for j, k in self._coeffs)

    @property
    def constant(self) -> sympy.Expr:
        return self.coefficient(0, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_hermitian(self) -> bool:
        """
        Returns
        -------
        bool
            True if coeff(j, k) is the complex conjugate of coeff(k, j).
        """
        return all(
            sympy.simplify(c - sympy.conjugate(self.coefficient(k, j))) == 0
            for (j, k), c in self._coeffs.items()
        )

    def _combine(self, other, sign: int) -> dict:
        coeffs = dict(self._coeffs)
        for key, c in other._coeffs.items():
            coeffs[key] = coeffs.get(key, 0) + sign * c
        return coeffs

    def _scaled(self, scalar) -> dict:
        scalar = exact(scalar)
        return {key: scalar * c for key, c in self._coeffs.items()}


class NormalPoly(_CoefficientMap):
    """
    A normal-ordered operator sum_{jk} c_jk (b^dagger)^j b^k.

    Products are re-normal-ordered with [b, b^dagger] = 1, so `*` is the
    operator product.
    """

    @classmethod
    def constant_term(cls, value) -> Self:
        return cls({(0, 0): value})

    @classmethod
    def identity(cls) -> Self:
        return cls({(0, 0): 1})

    @classmethod
    def annihilator(cls) -> Self:
        return cls({(0, 1): 1})

    @classmethod
    def creator(cls) -> Self:
        return cls({(1, 0): 1})

    @classmethod
    def number(cls) -> Self:
        return cls({(1, 1): 1})

    def __repr__(self):
        return f"NormalPoly({self._coeffs!r})"

    def __str__(self):
        terms = []
        for (j, k), c in self.items():
            monomial = "*".join(
                p for p in [_power("bd", j), _power("b", k)] if p
            )
            terms.append((c, monomial))
        return _format_terms(terms)

    def __eq__(self, other):
        if not isinstance(other, NormalPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other) -> Self:
        if not isinstance(other, NormalPoly):
            other = NormalPoly.constant_term(other)
        return NormalPoly(self._combine(other, 1))

    __radd__ = __add__

    def __sub__(self, other) -> Self:
        if not isinstance(other, NormalPoly):
            other = NormalPoly.constant_term(other)
        return NormalPoly(self._combine(other, -1))

    def __rsub__(self, other) -> Self:
        return NormalPoly.constant_term(other) - self

    def __neg__(self) -> Self:
        return NormalPoly(self._scaled(-1))

    def __mul__(self, other) -> Self:
        if not isinstance(other, NormalPoly):
            return NormalPoly(self._scaled(other))
        coeffs = {}
        for (a, p), c1 in self._coeffs.items():
            for (c, d), c2 in other._coeffs.items():
                # b^p (b^dagger)^c = sum_k C(p,k) C(c,k) k! bd^(c-k) b^(p-k)
                for k in range(min(p, c) + 1):
                    weight = math.comb(p, k) * math.comb(c, k)
                    weight *= math.factorial(k)
                    key = (a + c - k, p + d - k)
                    coeffs[key] = coeffs.get(key, 0) + weight * c1 * c2
        return NormalPoly(coeffs)

    def __rmul__(self, scalar) -> Self:
        return NormalPoly(self._scaled(scalar))

    def __truediv__(self, scalar) -> Self:
        return NormalPoly(self._scaled(1 / exact(scalar)))

    def __pow__(self, exponent: int) -> Self:
        if int(exponent) != exponent or exponent < 0:
            raise ValueError("Operators can only be raised to powers >= 0.")
        return normal_order([self] * int(exponent))

    def dagger(self) -> Self:
        return NormalPoly(
            {(k, j): sympy.conjugate(c) for (j, k), c in self._coeffs.items()},
        )

    def to_matrix(self, dim: int) -> fock.FockOperator:
        """
        Materialize the operator on the first `dim` number states.

        Normal-ordered words are exact under truncation, so every entry of
        the result equals the corresponding entry of the infinite matrix.
        """
        b, bd = fock.build_ladder(dim)
        matrix = np.zeros((dim, dim), dtype=complex)
        for (j, k), c in self._coeffs.items():
            word = np.linalg.matrix_power(bd.matrix, j)
            word = word @ np.linalg.matrix_power(b.matrix, k)
            matrix += complex(c) * word
        return fock.FockOperator(matrix)


def normal_order(product: Sequence[NormalPoly]) -> NormalPoly:
    """
    Returns
    -------
    NormalPoly
        The canonical normal-ordered form of the operator product of the
        factors, taken left to right. An empty product is the identity.
    """
    return functools.reduce(
        lambda lhs, rhs: lhs * rhs,
        product,
        NormalPoly.identity(),
    )


class PhaseSymbol(_CoefficientMap):
    """
    A polynomial phase-space function sum_{jk} s_jk zbar^j z^k.

    Attributes
    ----------
    kind: SymbolKind
        Which operator-to-function correspondence the symbol belongs to.
        The same polynomial represents different operators for different
        kinds.
    """

    def __init__(
        self,
        coeffs: Mapping[Monomial, object] | None = None,
        kind: SymbolKind = SymbolKind.WICK,
    ):
        super().__init__(coeffs)
        if not isinstance(kind, SymbolKind):
            raise TypeError("kind must be a SymbolKind.")
        self.kind = kind

    @classmethod
    def modulus_squared(cls, kind: SymbolKind = SymbolKind.WICK) -> Self:
        return cls({(1, 1): 1}, kind)

    def __repr__(self):
        return f"PhaseSymbol({self._coeffs!r}, kind={self.kind.value})"

    def __str__(self):
        terms = []
        for (j, k), c in self.items():
            if j == k:
                monomial = _power("|z|", 2 * j)
            else:
                monomial = "*".join(
                    p for p in [_power("zbar", j), _power("z", k)] if p
                )
            terms.append((c, monomial))
        return _format_terms(terms)

    def __eq__(self, other):
        if not isinstance(other, PhaseSymbol):
            return NotImplemented
        return self._coeffs == other._coeffs and self.kind == other.kind

    def __hash__(self):
        return hash((frozenset(self._coeffs.items()), self.kind))

    def _check_kind(self, other: Self):
        if other.kind != self.kind:
            raise SymbolKindError(
                f"Cannot combine a {self.kind.value} symbol with a "
                + f"{other.kind.value} symbol.",
            )

    def __add__(self, other) -> Self:
        if not isinstance(other, PhaseSymbol):
            other = PhaseSymbol({(0, 0): other}, self.kind)
        self._check_kind(other)
        return PhaseSymbol(self._combine(other, 1), self.kind)

    __radd__ = __add__

    def __sub__(self, other) -> Self:
        if not isinstance(other, PhaseSymbol):
            other = PhaseSymbol({(0, 0): other}, self.kind)
        self._check_kind(other)
        return PhaseSymbol(self._combine(other, -1), self.kind)

    def __rsub__(self, other) -> Self:
        return PhaseSymbol({(0, 0): other}, self.kind) - self

    def __neg__(self) -> Self:
        return PhaseSymbol(self._scaled(-1), self.kind)

    def __mul__(self, other) -> Self:
        """
        Pointwise product of functions, or scaling by a number.

        The pointwise product of two symbols is in general not the symbol
        of the operator product.
        """
        if not isinstance(other, PhaseSymbol):
            return PhaseSymbol(self._scaled(other), self.kind)
        self._check_kind(other)
        coeffs = {}
        for (a, p), c1 in self._coeffs.items():
            for (c, d), c2 in other._coeffs.items():
                key = (a + c, p + d)
                coeffs[key] = coeffs.get(key, 0) + c1 * c2
        return PhaseSymbol(coeffs, self.kind)

    def __rmul__(self, scalar) -> Self:
        return PhaseSymbol(self._scaled(scalar), self.kind)

    def __truediv__(self, scalar) -> Self:
        return PhaseSymbol(self._scaled(1 / exact(scalar)), self.kind)

    def __pow__(self, exponent: int) -> Self:
        if int(exponent) != exponent or exponent < 0:
            raise ValueError("Symbols can only be raised to powers >= 0.")
        result = PhaseSymbol({(0, 0): 1}, self.kind)
        for _ in range(int(exponent)):
            result = result * self
        return result

    def with_kind(self, kind: SymbolKind) -> Self:
        return PhaseSymbol(self._coeffs, kind)

    def without_constant(self) -> Self:
        coeffs = {k: c for k, c in self._coeffs.items() if k != (0, 0)}
        return PhaseSymbol(coeffs, self.kind)

    def evaluate(self, zbar, z):
        """
        Evaluate the polynomial with independent arguments zbar and z.

        Parameters
        ----------
        zbar, z: complex or np.ndarray
            Broadcastable arguments.

        Returns
        -------
        complex or np.ndarray
            sum_{jk} s_jk zbar^j z^k.
        """
        zbar = np.asarray(zbar, dtype=complex)
        z = np.asarray(z, dtype=complex)
        result = np.zeros(np.broadcast(zbar, z).shape, dtype=complex)
        for (j, k), c in self._coeffs.items():
            result = result + complex(c) * zbar**j * z**k
        if result.ndim == 0:
            return complex(result)
        return result

    def __call__(self, z):
        return self.evaluate(np.conj(z), z)


def laplacian(s: PhaseSymbol) -> PhaseSymbol:
    """
    Apply Delta = d^2/(dzbar dz): zbar^j z^k -> j k zbar^(j-1) z^(k-1).
    """
    coeffs = {
        (j - 1, k - 1): j * k * c
        for (j, k), c in s.coeffs.items()
        if j > 0 and k > 0
    }
    return PhaseSymbol(coeffs, s.kind)


def apply_exp_delta(
    s: PhaseSymbol,
    alpha,
    kind: SymbolKind | None = None,
) -> PhaseSymbol:
    """
    Compute e^{alpha Delta} s = sum_m alpha^m Delta^m s / m!.

    The sum is finite because Delta lowers the degree of every monomial.

    Parameters
    ----------
    s: PhaseSymbol
        The symbol to transform.

    alpha: number
        The exact exponent.

    kind: SymbolKind, optional
        The kind to tag the result with. Defaults to the kind of `s`.
    """
    alpha = exact(alpha)
    result = s
    term = s
    m = 0
    while not term.is_zero():
        m += 1
        term = laplacian(term) * (alpha / m)
        result = result + term
    return result.with_kind(kind or s.kind)


def wick_symbol(op: NormalPoly) -> PhaseSymbol:
    """
    The covariant symbol <z|op|z>: (b^dagger)^j b^k -> zbar^j z^k.
    """
    return PhaseSymbol(op.coeffs, SymbolKind.WICK)


def weyl_symbol(op: NormalPoly) -> PhaseSymbol:
    """
    The symmetric-ordering symbol e^{-Delta/2} <z|op|z>.
    """
    return symbol(op, SymbolKind.WEYL)


def antiwick_symbol(op: NormalPoly) -> PhaseSymbol:
    """
    The contravariant symbol e^{-Delta} <z|op|z>, i.e. the density P with
    op = int P(z) |z><z| d^2z/pi.
    """
    return symbol(op, SymbolKind.ANTI_WICK)


def symbol(op: NormalPoly, kind: SymbolKind) -> PhaseSymbol:
    """
    Returns
    -------
    PhaseSymbol
        The symbol of `op` of the requested kind.
    """
    return apply_exp_delta(wick_symbol(op), -kind.shift, kind)


def normal_poly(s: PhaseSymbol) -> NormalPoly:
    """
    Returns
    -------
    NormalPoly
        The operator whose symbol of kind `s.kind` is `s`, exactly.
    """
    wick = apply_exp_delta(s, s.kind.shift, SymbolKind.WICK)
    return NormalPoly(wick.coeffs)


def operator_from_symbol(s: PhaseSymbol, dim: int) -> fock.FockOperator:
    """
    Materialize the operator with symbol `s` on `dim` number states.
    """
    return normal_poly(s).to_matrix(dim)


def bose_hubbard_poly(U=1, mu=0) -> NormalPoly:
    """
    Returns
    -------
    NormalPoly
        (U/2) n (n - 1) - mu n = (U/2) (b^dagger)^2 b^2 - mu b^dagger b.
    """
    n = NormalPoly.number()
    return (n * n - n) * (exact(U) / 2) - n * exact(mu)


def linearized_weyl_bh(U=1, mu=0) -> PhaseSymbol:
    """
    The "linearized" Bose-Hubbard Weyl function (U/2)(n_W n_W - n_W) -
    mu n_W, built from pointwise products of n_W = |z|^2 - 1/2.

    At U = 1, mu = 0 this is 1/2 |z|^4 - |z|^2 + 3/8, which exceeds the
    true Weyl symbol of the Hamiltonian by exactly 1/8.
    """
    n_w = weyl_symbol(NormalPoly.number())
    return (n_w * n_w - n_w) * (exact(U) / 2) - n_w * exact(mu)
