"""
The two model problems: periodic data smoothing (linear) and identification
of the coefficient of a scalar linear ODE (nonlinear).
"""

from scaletik.problems.base import InverseProblem
from scaletik.problems.param_id import ParamIdProblem, ParamIdSpec
from scaletik.problems.smoothing import SmoothingProblem, SmoothingSpec
