"""Steady-state and transport solvers for open quantum chains."""

from ._core import *  # noqa: F401,F403
from ._core import __version__

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
