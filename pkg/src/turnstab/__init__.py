"""Stability analysis of turning processes under spindle-speed feedback.

Subpackages by role:

  * `params`: physical constants, dimensionless reduction, stationary state
  * `rootfind`: bracketed and open scalar root finding
  * `lobes_delayed`, `lobes_instant`: stability boundary parameterizations
  * `charroots`: characteristic root counting and verdicts
  * `simulate`: RK4 integration of the linear, nonlinear and threshold models
  * `cli`: command-line front end (CSV and SVG outputs)
"""

from .errors import TurnstabError

__all__ = ["TurnstabError"]
__version__ = "1.0.0"
