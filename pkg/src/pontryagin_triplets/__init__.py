"""Boundary triplets for isometric operators in finite-dimensional Pontryagin spaces.

The package works with linear relations stored as graph subspaces and
provides boundary triplets, gamma-fields and Weyl functions, Krein-type
resolvent formulas, a linear-fractional change of variable, and
generalized resolvents built from unitary colligations.
"""
from .config import get_tol, set_tol, tolerance
from .exceptions import *  # noqa: F401,F403
from .core import *  # noqa: F401,F403
from .relations import *  # noqa: F401,F403
from .boundary import *  # noqa: F401,F403
from .weyl import *  # noqa: F401,F403
from .resolvents import *  # noqa: F401,F403
from .moebius import *  # noqa: F401,F403
from .colligations import *  # noqa: F401,F403
from .sampling import *  # noqa: F401,F403
from .io import *  # noqa: F401,F403
from .suite import Check, Report, SUITES, run_checks, run_suite

__version__ = "0.1.0"
