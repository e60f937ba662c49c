# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause

import logging
import unittest

import sympy

from cspi import parser
from cspi.symbols import (
    NormalPoly,
    PhaseSymbol,
    SymbolKind,
    bose_hubbard_poly,
    weyl_symbol,
)


class TestOperatorParser(unittest.TestCase):
    """
    Test parsing of polynomials in the number operator.
    """

    def setUp(self):
        logging.disable()

    def test_bose_hubbard(self):
        """n*(n-1)/2 is the Bose-Hubbard Hamiltonian at U=1"""
        op = parser.parse_operator("n*(n-1)/2")
        self.assertEqual(op, bose_hubbard_poly(1, 0))
        self.assertEqual(op.coeffs, {(2, 2): sympy.Rational(1, 2)})

    def test_power(self):
        """powers"""
        square = parser.parse_operator("n^2")
        self.assertEqual(square, parser.parse_operator("n**2"))
        self.assertEqual(square, parser.parse_operator("n*n"))
        self.assertEqual(square.coeffs, {(2, 2): 1, (1, 1): 1})

    def test_precedence(self):
        """precedence and associativity"""
        op = parser.parse_operator("1 + 2*n^2 - n/2")
        expected = (
            NormalPoly.identity()
            + NormalPoly.number() ** 2 * 2
            - NormalPoly.number() / 2
        )
        self.assertEqual(op, expected)

        op = parser.parse_operator("-n^2")
        self.assertEqual(op, -(NormalPoly.number() ** 2))

    def test_decimal(self):
        """decimals are exact"""
        op = parser.parse_operator("0.1*n")
        self.assertEqual(op.coefficient(1, 1), sympy.Rational(1, 10))

    def test_errors(self):
        """invalid operators"""
        invalid = [
            "m",
            "|z|^2",
            "1/n",
            "n/0",
            "n^n",
            "n^-1",
            "n^(1/2)",
            "(n + 1",
            "n +",
            "n n",
            "",
        ]
        for text in invalid:
            with self.assertRaises(parser.ParseError):
                parser.parse_operator(text)


class TestSymbolParser(unittest.TestCase):
    """
    Test parsing of polynomials in |z|^2.
    """

    def setUp(self):
        logging.disable()

    def test_weyl_bose_hubbard(self):
        """the Weyl symbol of the Bose-Hubbard Hamiltonian"""
        text = "1/2*|z|^4 - |z|^2 + 1/4"
        s = parser.parse_symbol(text, SymbolKind.WEYL)
        self.assertEqual(s, weyl_symbol(bose_hubbard_poly(1, 0)))
        self.assertEqual(str(s), text)
        self.assertEqual(s.kind, SymbolKind.WEYL)

    def test_kind(self):
        """the same text gives symbols of different kinds"""
        wick = parser.parse_symbol("|z|^2", SymbolKind.WICK)
        anti = parser.parse_symbol("|z|^2", SymbolKind.ANTI_WICK)
        self.assertEqual(wick.coeffs, anti.coeffs)
        self.assertNotEqual(wick, anti)

    def test_grouped_power(self):
        """powers of parenthesized symbols"""
        s = parser.parse_symbol("(|z|^2 - 1)^2", SymbolKind.WICK)
        expected = PhaseSymbol({(2, 2): 1, (1, 1): -2, (0, 0): 1})
        self.assertEqual(s, expected)

    def test_errors(self):
        """invalid symbols"""
        invalid = ["z", "n", "|z|", "|z|^3", "|z|^2.5", "|z|^2 +"]
        for text in invalid:
            with self.assertRaises(parser.ParseError):
                parser.parse_symbol(text, SymbolKind.WICK)

        with self.assertRaises(parser.TokenError):
            parser.parse_symbol("|z|^2 & 1", SymbolKind.WICK)


class TestCoefficientParser(unittest.TestCase):
    """
    Test parsing of explicit monomial lists.
    """

    def setUp(self):
        logging.disable()

    def test_coefficients(self):
        """coefficient lists"""
        coeffs = parser.parse_coefficients("(2,2): 1/2, (1,1): -1, (0,0): 3")
        self.assertEqual(
            coeffs,
            {
                (2, 2): sympy.Rational(1, 2),
                (1, 1): sympy.Integer(-1),
                (0, 0): sympy.Integer(3),
            },
        )

    def test_off_diagonal(self):
        """monomials need not be phase invariant"""
        coeffs = parser.parse_coefficients("(1,0): (1+1)/4")
        self.assertEqual(coeffs, {(1, 0): sympy.Rational(1, 2)})

    def test_repeated(self):
        """repeated monomials are summed"""
        coeffs = parser.parse_coefficients("(1,1): 1, (1,1): 2")
        self.assertEqual(coeffs, {(1, 1): sympy.Integer(3)})

    def test_errors(self):
        """invalid lists"""
        invalid = [
            "",
            "(1,1)",
            "(1,1):",
            "(1.5,1): 2",
            "(1,1): |z|^2",
            "(1,1): 1 (0,0): 2",
            "1: 2",
        ]
        for text in invalid:
            with self.assertRaises(parser.ParseError):
                parser.parse_coefficients(text)


if __name__ == "__main__":
    unittest.main()
