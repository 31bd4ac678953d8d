# SPDX-License-Identifier: Apache-2.0
"""Bit-exact simulator of a RISC-V scalar core with a 32-lane 16-bit SIMD
co-processor, plus assembler, fixed-point SNN kernels and experiment harness."""

from ._fenn import *  # noqa: F401,F403
from ._fenn import __doc__  # noqa: F401

__version__ = "1.0.0"
