#!/usr/bin/env python3
# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause

from setuptools import setup

if __name__ == "__main__":
    setup()
