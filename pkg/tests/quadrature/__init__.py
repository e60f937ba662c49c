# Copyright (C) 2026 The cspi developers
# SPDX-License-Identifier: BSD-3-Clause
