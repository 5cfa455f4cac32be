"""Entangled-pair experiment simulator and analysis toolkit."""

from ._core import *  # noqa: F401,F403
from ._core import InvalidInput, NumericalFailure, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
