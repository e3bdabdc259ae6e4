"""Exact flows of integrable Hamiltonian systems with action jumps,
statistical-ensemble propagation, and time-average convergence checks."""

from ensflow._core import *  # noqa: F401,F403
from ensflow._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
