"""Chung-Yao lattices, interpolation and divided differences."""

from ._cylattice import *  # noqa: F401,F403
from ._cylattice import __doc__  # noqa: F401
