"""Traveling fronts of monostable reaction-diffusion equations.

Profiles and minimal speeds, 1D and 2D moving-frame solvers, graph
evolutions for the front position, residual checks for comparison
functions, and an experiment harness with a command-line interface.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .reaction_terms import *  # noqa: F401,F403
from .profile import *  # noqa: F401,F403
from .pde1d import *  # noqa: F401,F403
from .pde2d import *  # noqa: F401,F403
from .front_dynamics import *  # noqa: F401,F403
from .comparison_functions import *  # noqa: F401,F403
from .harness import ExperimentConfig, ExperimentReport, emit_report, list_experiments, run_experiment  # noqa: F401
