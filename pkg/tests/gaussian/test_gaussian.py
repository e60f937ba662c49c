# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause

import logging
import math
import unittest

import numpy as np

from cspi import gaussian
from cspi.gaussian import GaussianParams, Prescription
from cspi.symbols import SymbolKind
from cspi.util import ConvergenceError

EXPECTED_RATIOS = {
    Prescription.MINUS: 1.367879,
    Prescription.PLUS: 3.718282,
    Prescription.SYMMETRIC: 2.255252,
}


class TestParameters(unittest.TestCase):
    """
    Test validation of Gaussian parameters.
    """

    def setUp(self):
        logging.disable()

    def test_valid(self):
        """mu0 is optional"""
        p = GaussianParams(1.0, 2.0)
        self.assertIsNone(p.mu0)
        with self.assertRaises(gaussian.InvalidParameterError):
            p.reference()

    def test_invalid(self):
        """parameters must be positive and finite"""
        invalid = [
            (0.0, 1.0, None),
            (-1.0, 1.0, None),
            (1.0, 0.0, None),
            (1.0, float("inf"), None),
            (1.0, 1.0, -2.0),
            (float("nan"), 1.0, 2.0),
        ]
        for beta, mu, mu0 in invalid:
            with self.assertRaises(gaussian.InvalidParameterError):
                GaussianParams(beta, mu, mu0)

    def test_prescription_names(self):
        """prescription aliases"""
        self.assertEqual(Prescription.from_name("wick"), Prescription.MINUS)
        self.assertEqual(
            Prescription.from_name("Contravariant"),
            Prescription.PLUS,
        )
        self.assertEqual(
            Prescription.from_name("weyl"),
            Prescription.SYMMETRIC,
        )
        with self.assertRaises(ValueError):
            Prescription.from_name("retarded")

    def test_prescription_kinds(self):
        """each prescription describes one symbol kind"""
        for prescription in Prescription:
            kind = prescription.symbol_kind
            self.assertEqual(Prescription.for_kind(kind), prescription)
            self.assertEqual(float(kind.shift), prescription.theta0)
        self.assertEqual(
            Prescription.for_kind(SymbolKind.WEYL),
            Prescription.SYMMETRIC,
        )


class TestGreenFunction(unittest.TestCase):
    """
    Test the continuum Green function and its equal-time values.
    """

    def setUp(self):
        logging.disable()

    def test_equal_time(self):
        """equal times need a prescription"""
        p = GaussianParams(1.0, 1.0)
        with self.assertRaises(gaussian.EqualTimeError):
            gaussian.green_function(0.25, 0.25, p)

    def test_domain(self):
        """times lie in [0, beta)"""
        p = GaussianParams(1.0, 1.0)
        for tau1, tau2 in [(1.0, 0.5), (-0.1, 0.5), (0.5, 2.0)]:
            with self.assertRaises(gaussian.InvalidParameterError):
                gaussian.green_function(tau1, tau2, p)

    def test_jump(self):
        """G jumps by one across equal times"""
        p = GaussianParams(2.0, 0.7)
        after = gaussian.green_function(0.5 + 1e-9, 0.5, p)
        before = gaussian.green_function(0.5, 0.5 + 1e-9, p)
        self.assertAlmostEqual(after - before, 1.0, places=6)
        n_b = 1 / math.expm1(2.0 * 0.7)
        self.assertAlmostEqual(before, n_b, places=6)

    def test_at_zero(self):
        """G(0) = n_B + theta0"""
        p = GaussianParams(1.0, 1.0)
        n_b = 1 / (math.e - 1)
        for prescription in Prescription:
            self.assertAlmostEqual(
                gaussian.green_at_zero(prescription, p),
                n_b + prescription.theta0,
                places=14,
            )

    def test_thermal_correlator(self):
        """G agrees with the imaginary-time operator correlator"""
        p = GaussianParams(1.5, 0.8)
        for tau1, tau2 in [(0.9, 0.2), (0.1, 0.4), (1.4, 0.0)]:
            expected = gaussian.thermal_correlator(tau1 - tau2, p)
            self.assertAlmostEqual(
                gaussian.green_function(tau1, tau2, p),
                expected,
                places=10,
            )
        with self.assertRaises(gaussian.InvalidParameterError):
            gaussian.thermal_correlator(0.0, p)


class TestRatio(unittest.TestCase):
    """
    Test the Gaussian ratio I_mu / I_mu0 for each prescription.
    """

    def setUp(self):
        logging.disable()
        self.p = GaussianParams(1.0, 1.0, 2.0)

    def test_closed(self):
        """closed form at beta = mu = 1, mu0 = 2"""
        for prescription, expected in EXPECTED_RATIOS.items():
            self.assertAlmostEqual(
                gaussian.ratio_closed(prescription, self.p),
                expected,
                places=6,
            )

    def test_prescriptions_differ(self):
        """the ratio depends on theta(0) through e^{-theta0 beta dmu}"""
        minus = gaussian.ratio_closed(Prescription.MINUS, self.p)
        plus = gaussian.ratio_closed(Prescription.PLUS, self.p)
        symmetric = gaussian.ratio_closed(Prescription.SYMMETRIC, self.p)
        self.assertAlmostEqual(plus / minus, math.e, places=12)
        self.assertAlmostEqual(symmetric / minus, math.sqrt(math.e), places=12)

    def test_integration(self):
        """integrating tr G over mu reproduces the closed form"""
        for prescription in Prescription:
            closed = gaussian.ratio_closed(prescription, self.p)
            integrated = gaussian.ratio_by_integration(prescription, self.p)
            self.assertLess(abs(integrated - closed) / closed, 1e-12)

    def test_integration_sweep(self):
        """integration and closed form agree for beta mu in [0.1, 5]"""
        for beta in [0.5, 2.0]:
            for x in np.linspace(0.1, 5.0, 12):
                p = GaussianParams(beta, x / beta, 1.0 / beta)
                for prescription in Prescription:
                    with self.subTest(beta=beta, x=x, p=prescription):
                        closed = gaussian.ratio_closed(prescription, p)
                        integrated = gaussian.ratio_by_integration(
                            prescription,
                            p,
                        )
                        self.assertLess(
                            abs(integrated - closed) / closed,
                            1e-10,
                        )

    def test_integration_convergence(self):
        """unresolved trace integrals are reported"""
        p = GaussianParams(1.0, 5.0, 1e-3)
        with self.assertRaises(ConvergenceError):
            gaussian.ratio_by_integration(Prescription.MINUS, p, 8)
        with self.assertRaises(gaussian.InvalidParameterError):
            gaussian.ratio_by_integration(Prescription.MINUS, self.p, 4)

    def test_operator_ratio(self):
        """the ordered trace ratio matches the closed form"""
        for prescription in Prescription:
            self.assertAlmostEqual(
                gaussian.ordered_trace_ratio(prescription, self.p),
                gaussian.ratio_closed(prescription, self.p),
                places=12,
            )

    def test_missing_reference(self):
        """ratios need mu0"""
        with self.assertRaises(gaussian.InvalidParameterError):
            gaussian.ratio_closed(Prescription.MINUS, GaussianParams(1, 1))


class TestLattice(unittest.TestCase):
    """
    Test the lattice determinants of the discretized kernel.
    """

    def setUp(self):
        logging.disable()
        self.p = GaussianParams(1.0, 1.0, 2.0)

    def test_kernel(self):
        """kernel entries"""
        kernel = gaussian.lattice_kernel(Prescription.MINUS, self.p, 4)
        expected = np.array(
            [
                [1.0, 0.0, 0.0, -0.75],
                [-0.75, 1.0, 0.0, 0.0],
                [0.0, -0.75, 1.0, 0.0],
                [0.0, 0.0, -0.75, 1.0],
            ],
        )
        np.testing.assert_allclose(kernel, expected)

        kernel = gaussian.lattice_kernel(Prescription.SYMMETRIC, self.p, 4)
        self.assertEqual(kernel[0, 0], 1.125)
        self.assertEqual(kernel[1, 0], -0.875)

    def test_lu(self):
        """dense LU agrees with the product formula"""
        for prescription in Prescription:
            closed = gaussian.lattice_determinant(prescription, self.p, 64)
            dense = gaussian.lattice_determinant(
                prescription,
                self.p,
                64,
                method="lu",
            )
            self.assertEqual(dense.method, "lu")
            self.assertLess(
                abs(dense.value - closed.value) / abs(closed.value),
                1e-10,
            )

    def test_dense_determinant(self):
        """pivoting signs"""
        matrix = np.array([[0.0, 2.0], [3.0, 0.0]])
        self.assertAlmostEqual(gaussian.dense_determinant(matrix), -6.0)

    def test_limits(self):
        """determinants converge to their continuum limits"""
        limits = {
            Prescription.MINUS: 1 - math.exp(-1.0),
            Prescription.PLUS: math.e - 1,
            Prescription.SYMMETRIC: 2 * math.sinh(0.5),
        }
        for prescription, limit in limits.items():
            det = gaussian.lattice_determinant(prescription, self.p, 4096)
            self.assertAlmostEqual(det.limit, limit, places=14)
            self.assertLess(det.relative_error, 1e-3)

    def test_plus_normalization(self):
        """PLUS determinants carry a (1 + eps mu)^N normalization"""
        det = gaussian.lattice_determinant(Prescription.PLUS, self.p, 1000)
        self.assertAlmostEqual(det.normalization, (1.001) ** 1000, places=9)
        self.assertAlmostEqual(
            det.normalized,
            det.value / det.normalization,
            places=14,
        )
        det = gaussian.lattice_determinant(Prescription.MINUS, self.p, 1000)
        self.assertEqual(det.normalization, 1.0)

    def test_first_order(self):
        """errors halve per doubling of N"""
        for prescription in Prescription:
            determinants = [
                gaussian.lattice_determinant(prescription, self.p, n)
                for n in [256, 512, 1024, 2048]
            ]
            ratios = gaussian.error_ratios(determinants)
            self.assertTrue(math.isnan(ratios[0]))
            for ratio in ratios[1:]:
                self.assertAlmostEqual(ratio, 2.0, delta=0.02)

    def test_lattice_ratio(self):
        """lattice ratios approach the closed form"""
        for prescription, expected in EXPECTED_RATIOS.items():
            ratio = gaussian.lattice_ratio(prescription, self.p, 4096)
            self.assertAlmostEqual(ratio, expected, delta=2e-3)

    def test_equal_time_element(self):
        """the element coupled to mu approaches G(0) of the prescription"""
        n_slices = 1024
        p = GaussianParams(1.0, 1.0)
        n_b = 1 / math.expm1(1.0)
        green = gaussian.lattice_green(Prescription.MINUS, p, n_slices)
        self.assertAlmostEqual(green[0, 1], n_b, delta=5e-3)
        green = gaussian.lattice_green(Prescription.PLUS, p, n_slices)
        self.assertAlmostEqual(green[1, 1], n_b + 1, delta=5e-3)
        green = gaussian.lattice_green(Prescription.SYMMETRIC, p, n_slices)
        average = 0.5 * (green[1, 1] + green[0, 1])
        self.assertAlmostEqual(average, n_b + 0.5, delta=5e-3)

    def test_step_size(self):
        """eps * mu must be below 1"""
        p = GaussianParams(1.0, 4.0)
        with self.assertRaises(gaussian.StepSizeError):
            gaussian.lattice_determinant(Prescription.MINUS, p, 2)
        with self.assertRaises(gaussian.StepSizeError):
            gaussian.lattice_kernel(Prescription.PLUS, p, 4)
        with self.assertRaises(gaussian.InvalidParameterError):
            gaussian.lattice_determinant(Prescription.MINUS, p, 1)

    def test_method(self):
        """unknown methods and oversized dense lattices"""
        with self.assertRaises(gaussian.InvalidParameterError):
            gaussian.lattice_determinant(
                Prescription.MINUS,
                self.p,
                16,
                method="qr",
            )
        with self.assertRaises(gaussian.InvalidParameterError):
            gaussian.lattice_determinant(
                Prescription.MINUS,
                self.p,
                gaussian.MAX_DENSE_SLICES + 1,
                method="lu",
            )


if __name__ == "__main__":
    unittest.main()
