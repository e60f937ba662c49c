# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause

import logging
import unittest

import numpy as np
import sympy
from sympy.physics.quantum import Dagger
from sympy.physics.quantum.boson import BosonOp
from sympy.physics.quantum.operatorordering import normal_ordered_form

from cspi import fock, quadrature
from cspi.symbols import (
    NormalPoly,
    PhaseSymbol,
    SymbolKind,
    SymbolKindError,
    antiwick_symbol,
    apply_exp_delta,
    bose_hubbard_poly,
    exact,
    laplacian,
    linearized_weyl_bh,
    normal_order,
    normal_poly,
    operator_from_symbol,
    symbol,
    weyl_symbol,
    wick_symbol,
)

b = NormalPoly.annihilator()
bd = NormalPoly.creator()
n = NormalPoly.number()


def as_sympy(poly: NormalPoly, a: BosonOp) -> sympy.Expr:
    return sympy.Add(
        *[c * Dagger(a) ** j * a**k for (j, k), c in poly.coeffs.items()],
    )


def random_poly(rng: np.random.Generator, degree: int = 4) -> NormalPoly:
    """A normal-ordered polynomial with random Gaussian-rational terms."""
    coeffs = {}
    for j in range(degree + 1):
        for k in range(degree + 1 - j):
            if rng.random() < 0.5:
                continue
            re, im = rng.integers(-6, 7, size=2)
            den = int(rng.integers(1, 5))
            coeffs[(j, k)] = sympy.Rational(int(re), den) + sympy.I * int(im)
    return NormalPoly(coeffs)


class TestNormalOrder(unittest.TestCase):
    """
    Test normal ordering of products of ladder operators.
    """

    def setUp(self):
        logging.disable()

    def test_commutator(self):
        """b b^dagger = b^dagger b + 1"""
        self.assertEqual(b * bd, n + 1)
        self.assertEqual(b * bd - bd * b, NormalPoly.identity())

    def test_against_sympy(self):
        """products agree with sympy's normal_ordered_form"""
        a = BosonOp("a")
        products = [
            ([b, bd], a * Dagger(a)),
            ([b, b, bd], a**2 * Dagger(a)),
            ([b, b, b, bd], a**3 * Dagger(a)),
            ([bd, b], Dagger(a) * a),
        ]
        for factors, expr in products:
            ours = as_sympy(normal_order(factors), a)
            theirs = normal_ordered_form(expr)
            self.assertEqual(sympy.expand(ours - theirs), 0)

    def test_against_matrices(self):
        """normal-ordered forms match truncated matrix products"""
        dim = 12
        ladder, creator = fock.build_ladder(dim)
        product = ladder @ ladder @ creator @ creator
        ours = normal_order([b, b, bd, bd])
        self.assertEqual(ours, bd**2 * b**2 + bd * b * 4 + 2)
        block = slice(0, dim - 2)
        np.testing.assert_allclose(
            ours.to_matrix(dim).matrix[block, block],
            product.matrix[block, block],
            atol=1e-10,
        )

    def test_empty_product(self):
        """an empty product is the identity"""
        self.assertEqual(normal_order([]), NormalPoly.identity())

    def test_dagger(self):
        """adjoints reverse the monomials"""
        op = bd * bd * b + n * 3
        self.assertEqual(op.dagger(), bd * b * b + n * 3)
        self.assertFalse(op.is_hermitian())
        self.assertTrue((op + op.dagger()).is_hermitian())

    def test_power(self):
        """powers"""
        self.assertEqual(n**0, NormalPoly.identity())
        self.assertEqual(n**2, bd**2 * b**2 + n)
        with self.assertRaises(ValueError):
            n ** (-1)

    def test_associative(self):
        """operator products are associative"""
        rng = np.random.default_rng(7)
        for _ in range(10):
            x, y, z = (random_poly(rng, 3) for _ in range(3))
            self.assertEqual((x * y) * z, x * (y * z))

    def test_product_matrix(self):
        """products agree with truncated matrix products"""
        rng = np.random.default_rng(11)
        dim = 20
        for _ in range(10):
            x, y = random_poly(rng), random_poly(rng)
            keep = dim - x.degree
            product = (x * y).to_matrix(dim).matrix[:keep, :keep]
            expected = x.to_matrix(dim).matrix @ y.to_matrix(dim).matrix
            np.testing.assert_allclose(
                product,
                expected[:keep, :keep],
                atol=1e-6,
            )


class TestSymbols(unittest.TestCase):
    """
    Test conversion between operators and their phase-space symbols.
    """

    def setUp(self):
        logging.disable()

    def test_number_symbols(self):
        """symbols of the number operator"""
        z2 = PhaseSymbol.modulus_squared
        self.assertEqual(wick_symbol(n), z2(SymbolKind.WICK))
        self.assertEqual(
            weyl_symbol(n),
            z2(SymbolKind.WEYL) - sympy.Rational(1, 2),
        )
        self.assertEqual(antiwick_symbol(n), z2(SymbolKind.ANTI_WICK) - 1)

    def test_weyl_bose_hubbard(self):
        """the Weyl symbol of (1/2) n (n - 1)"""
        s = weyl_symbol(bose_hubbard_poly(1, 0))
        self.assertEqual(str(s), "1/2*|z|^4 - |z|^2 + 1/4")
        self.assertEqual(s.constant, sympy.Rational(1, 4))

    def test_linearized_offset(self):
        """the linearized Weyl function is shifted by U/8"""
        for U, mu in [(1, 0), (2, 0), (sympy.Rational(1, 3), 1)]:
            difference = linearized_weyl_bh(U, mu) - weyl_symbol(
                bose_hubbard_poly(U, mu),
            )
            self.assertEqual(difference.coeffs, {(0, 0): exact(U) / 8})
        self.assertEqual(
            str(linearized_weyl_bh()),
            "1/2*|z|^4 - |z|^2 + 3/8",
        )

    def test_inverse(self):
        """normal_poly inverts symbol for every kind"""
        op = bose_hubbard_poly(2, sympy.Rational(1, 2)) + bd * b * b
        for kind in SymbolKind:
            s = symbol(op, kind)
            self.assertEqual(s.kind, kind)
            self.assertEqual(normal_poly(s), op)

    def test_inverse_random(self):
        """normal_poly inverts symbol for random operators"""
        rng = np.random.default_rng(2026)
        dim = 20
        for _ in range(50):
            op = random_poly(rng)
            matrix = op.to_matrix(dim).matrix
            for kind in SymbolKind:
                s = symbol(op, kind)
                self.assertEqual(normal_poly(s), op)
                np.testing.assert_allclose(
                    operator_from_symbol(s, dim).matrix,
                    matrix,
                    atol=1e-9,
                )

    def test_exp_delta_hermitian(self):
        """real Laplacian flows keep symbols of Hermitian operators real"""
        rng = np.random.default_rng(5)
        for _ in range(10):
            op = random_poly(rng)
            s = wick_symbol(op + op.dagger())
            self.assertTrue(s.is_hermitian())
            for alpha in [sympy.Rational(1, 2), -1, sympy.Rational(-3, 2)]:
                self.assertTrue(apply_exp_delta(s, alpha).is_hermitian())
        s = apply_exp_delta(wick_symbol(n * sympy.I), 1)
        self.assertFalse(s.is_hermitian())

    def test_laplacian(self):
        """Delta zbar^j z^k = j k zbar^(j-1) z^(k-1)"""
        s = PhaseSymbol({(2, 3): 1, (1, 0): 5, (0, 0): 2})
        self.assertEqual(laplacian(s), PhaseSymbol({(1, 2): 6}))

    def test_exp_delta_group(self):
        """e^{a Delta} e^{b Delta} = e^{(a + b) Delta}"""
        s = PhaseSymbol({(3, 3): 1, (2, 1): 2, (1, 1): -1})
        half = sympy.Rational(1, 2)
        twice = apply_exp_delta(apply_exp_delta(s, half), -1)
        self.assertEqual(twice, apply_exp_delta(s, -half))
        self.assertEqual(apply_exp_delta(apply_exp_delta(s, 1), -1), s)

    def test_antiwick_is_p_function(self):
        """an operator is the phase-space average of its anti-Wick symbol"""
        op = n * n - n * 2
        s = antiwick_symbol(op)
        grid = quadrature.build_grid(20, 24)
        dim = 10
        amplitudes = fock.coherent_amplitudes(grid.nodes, dim)
        values = s(grid.nodes) * grid.weights
        matrix = amplitudes.T @ (values[:, None] * amplitudes.conj())
        np.testing.assert_allclose(
            matrix,
            op.to_matrix(dim).matrix,
            atol=1e-9,
        )

    def test_wick_is_expectation(self):
        """the Wick symbol is the coherent-state expectation value"""
        op = bose_hubbard_poly(1, sympy.Rational(1, 2))
        z = 0.6 - 0.9j
        dim = 40
        state = fock.coherent_vector(z, dim)
        expected = state.expectation(op.to_matrix(dim))
        self.assertAlmostEqual(wick_symbol(op)(z), expected, places=10)

    def test_operator_from_symbol(self):
        """materializing a Weyl symbol gives its operator"""
        s = weyl_symbol(bose_hubbard_poly(1, 0))
        matrix = operator_from_symbol(s, 6).matrix
        k = np.arange(6)
        np.testing.assert_allclose(matrix, np.diag(0.5 * k * (k - 1)))

    def test_evaluate(self):
        """independent arguments"""
        s = PhaseSymbol({(1, 0): 1, (0, 1): 2})
        self.assertEqual(s.evaluate(3.0, 5.0), 13.0)
        self.assertEqual(s(1j), -1j + 2j)
        values = s.evaluate(np.array([1.0, 2.0]), 0.0)
        np.testing.assert_allclose(values, [1.0, 2.0])

    def test_kind_mismatch(self):
        """symbols of different kinds do not mix"""
        wick = PhaseSymbol.modulus_squared(SymbolKind.WICK)
        weyl = PhaseSymbol.modulus_squared(SymbolKind.WEYL)
        with self.assertRaises(SymbolKindError):
            wick + weyl
        with self.assertRaises(SymbolKindError):
            wick * weyl
        self.assertEqual(wick.with_kind(SymbolKind.WEYL), weyl)

    def test_without_constant(self):
        """constant terms are removed"""
        s = linearized_weyl_bh()
        self.assertEqual(s.without_constant().constant, 0)
        self.assertEqual(
            s.without_constant(),
            weyl_symbol(bose_hubbard_poly()).without_constant(),
        )

    def test_kind_names(self):
        """kind aliases"""
        self.assertEqual(SymbolKind.from_name("covariant"), SymbolKind.WICK)
        self.assertEqual(
            SymbolKind.from_name("Contravariant"),
            SymbolKind.ANTI_WICK,
        )
        self.assertEqual(SymbolKind.from_name("weyl"), SymbolKind.WEYL)
        with self.assertRaises(ValueError):
            SymbolKind.from_name("husimi")


class TestExact(unittest.TestCase):
    """
    Test conversion of coefficients to exact numbers.
    """

    def setUp(self):
        logging.disable()

    def test_float(self):
        """floats use their shortest decimal form"""
        self.assertEqual(exact(0.1), sympy.Rational(1, 10))
        self.assertEqual(exact(np.float64(0.25)), sympy.Rational(1, 4))
        self.assertEqual(exact(1 + 0.5j), 1 + sympy.I / 2)

    def test_invalid(self):
        """non-numbers are rejected"""
        for value in [True, float("nan"), float("inf"), sympy.Symbol("x")]:
            with self.assertRaises(TypeError):
                exact(value)


if __name__ == "__main__":
    unittest.main()
