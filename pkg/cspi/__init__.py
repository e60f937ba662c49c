# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
"""
Coherent-state path integrals: operator symbols, Gaussian lattice
determinants, phase-space transfer matrices and spin coherent states.
"""

__version__ = "1.0.0"
