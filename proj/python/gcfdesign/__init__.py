"""Fixed-point generalized comb filter design (Python bindings)."""

from ._core import *  # noqa: F401,F403
from ._core import ParameterError, RegisterOverflow

__all__ = [name for name in dir() if not name.startswith("_")]
