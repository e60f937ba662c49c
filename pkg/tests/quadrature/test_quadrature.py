# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause

import logging
import unittest

import numpy as np

from cspi import quadrature


class TestGrid(unittest.TestCase):
    """
    Test construction of phase-space quadrature grids.
    """

    def setUp(self):
        logging.disable()

    def test_layout(self):
        """nodes are ordered radial index outermost"""
        grid = quadrature.build_grid(3, 4)
        self.assertEqual(grid.size, 12)
        radii = np.abs(grid.nodes).reshape(3, 4)
        np.testing.assert_allclose(radii, radii[:, :1] * np.ones((1, 4)))
        self.assertTrue(np.all(np.diff(radii[:, 0]) > 0))
        np.testing.assert_allclose(grid.nodes[1] / grid.nodes[0], 1j)

    def test_weights(self):
        """weights are positive and sum to one"""
        grid = quadrature.build_grid(24, 32)
        self.assertTrue(np.all(grid.weights > 0))
        self.assertAlmostEqual(np.sum(grid.weights), 1.0, places=12)
        np.testing.assert_allclose(np.exp(grid.log_weights), grid.weights)

    def test_invalid(self):
        """orders must be integers >= 2"""
        for radial, angular in [(1, 8), (8, 1), (0, 0), (4.0, 8)]:
            with self.assertRaises(ValueError):
                quadrature.build_grid(radial, angular)

    def test_repr(self):
        """grids describe their orders"""
        grid = quadrature.build_grid(5, 6)
        self.assertEqual(
            repr(grid),
            "QuadratureGrid(radial_order=5, angular_order=6)",
        )

    def test_guarantees(self):
        """exactness range"""
        grid = quadrature.build_grid(4, 3)
        self.assertTrue(grid.guarantees(7, 7))
        self.assertTrue(grid.guarantees(5, 7))
        self.assertFalse(grid.guarantees(8, 8))
        self.assertFalse(grid.guarantees(0, 3))

    def test_max_abs2(self):
        """the outermost node"""
        grid = quadrature.build_grid(6, 4)
        self.assertAlmostEqual(grid.max_abs2, np.max(np.abs(grid.nodes) ** 2))
        self.assertGreater(grid.max_abs2, 6)


class TestIdentity(unittest.TestCase):
    """
    Test the resolution of identity on a grid.
    """

    def setUp(self):
        logging.disable()

    def test_exact(self):
        """the identity is resolved within the guaranteed range"""
        grid = quadrature.build_grid(20, 32)
        check = quadrature.check_identity(grid, 16)
        self.assertLess(check.max_deviation, 1e-10)
        self.assertEqual(check.aliased, [])
        self.assertEqual(check.dim, 16)

    def test_hermitian(self):
        """the quadrature estimate is Hermitian"""
        grid = quadrature.build_grid(8, 6)
        R = quadrature.identity_matrix(grid, 10)
        np.testing.assert_allclose(R, R.conj().T, atol=1e-12)

    def test_angular_aliasing(self):
        """phases repeat after Q_a steps"""
        grid = quadrature.build_grid(10, 4)
        pairs = quadrature.aliased_pairs(grid, 9)
        aliased = {(m, n) for m, n, _ in pairs}
        self.assertIn((0, 4), aliased)
        self.assertIn((1, 5), aliased)
        self.assertIn((0, 8), aliased)
        for m, n, deviation in pairs:
            self.assertLessEqual(m, n)
            self.assertFalse(grid.guarantees(m, n))
            self.assertGreater(deviation, 1e-12)

    def test_radial_aliasing(self):
        """number states beyond 2 Q_r - 1 are not resolved"""
        grid = quadrature.build_grid(3, 16)
        pairs = quadrature.aliased_pairs(grid, 8)
        self.assertIn(6, [m for m, n, _ in pairs if m == n])

    def test_warning(self):
        """aliasing is reported"""
        logging.disable(logging.NOTSET)
        grid = quadrature.build_grid(10, 4)
        with self.assertLogs("cspi.quadrature", level="WARNING") as cm:
            quadrature.check_identity(grid, 9)
        self.assertIn("quadrature aliasing", cm.output[0])


if __name__ == "__main__":
    unittest.main()
