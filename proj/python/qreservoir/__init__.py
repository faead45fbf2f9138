"""Quantum reservoir computing toolkit.

A trajectory statevector simulator, a hook-based circuit-construction
contract (before/during/after), prepackaged Static and Incremental reservoir
schemes, a ridge-regression readout, and a closed-loop forecaster.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__, gates  # noqa: F401
