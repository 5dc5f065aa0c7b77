"""
Contains values for global constants.
"""

import math


#: Labels attached to the two concrete scale constructions.
FOURIER_SCALE_LABEL = "fourier-periodic"
PENCIL_SCALE_LABEL = "pencil-interval"

#: Size caps keeping ``lambda ** s`` inside double precision for ``s >= -2``.
MAX_WAVENUMBER = 4096
MAX_PENCIL_DIM = 2048

#: Relative tolerance of the eigenvalue floor ``lambda_min >= 1``.
EIGENVALUE_FLOOR_RTOL = 1e-12
#: Relative tolerance of the pencil eigen-solver residual.
PENCIL_RESIDUAL_RTOL = 1e-8
#: Slack allowed in the interpolation inequality.
INTERPOLATION_SLACK = 1e-10

PERIOD = 2.0 * math.pi

# Reference solutions and the supremum of their smoothness index u.
SMOOTHING_REFERENCE_U = {"step": 0.5, "sqrt_bump": 1.0, "hat": 1.5}
PARAM_ID_REFERENCE_U = {"hat": 1.5, "t_sqrt_t": 2.0, "parabola": 2.5}

#: Stability variants of the smoothing problem: (a, gamma).
STABILITY_VARIANTS = {"lipschitz_a1": (1.0, 1.0), "hoelder_a0": (0.0, 0.5)}

# Smoothing defaults
DEFAULT_TRUNCATION = 2048
#: Truncation error must sit this factor below the smallest noise level.
RESOLUTION_FACTOR = 10.0
#: The truncation tail is estimated against an expansion this many times longer.
TAIL_OVERSAMPLING = 8

# Parameter identification defaults
DEFAULT_HORIZON = 1.0
DEFAULT_INITIAL_STATE = 1.0
DEFAULT_GRID = 200
DEFAULT_GAUSS_POINTS = 3
SPLINE_DEGREE = 3

# Gauss-Newton
GN_MAX_ITERATIONS = 100
GN_MAX_HALVINGS = 30
GN_GRADIENT_TOL = 1e-12
#: Stop once the functional decreases by less than ``delta**2 / GN_DECREASE_DIVISOR``.
GN_DECREASE_DIVISOR = 10.0
#: Predicted decreases below this fraction of the functional count as converged.
GN_PREDICTED_RTOL = 1e-14

# Discrepancy principle
DISCREPANCY_TAU = 4.0
DISCREPANCY_MAX_STEPS = 60
#: Lower bound factor for alpha at the stopping index: alpha >= 7 delta^2 / M^2.
DISCREPANCY_ALPHA_FACTOR = 7.0

RULES = ["simple", "apriori", "discrepancy"]
PROBLEMS = ["smoothing", "param-id"]

# Studies
MIN_LADDER_STEPS = 4
MAX_FAILURE_FRACTION = 0.2
DEFAULT_REPETITIONS = 5
SMOOTHING_LADDER = (3, 14)
PARAM_ID_LADDER = (3, 9)
DEFAULT_WORKERS = 4
NOISE_GENERATOR = "PCG64"
MIN_FIT_POINTS = 3

#: Table grids: penalty indices and reference smoothness per problem.
TABLE_GRIDS = {
    "smoothing": {"s": [0.0, 1.0], "u": [0.5, 1.0, 1.5], "norms": [0.0, 1.0]},
    "param-id": {"s": [1.0, 2.0], "u": [1.5, 2.0, 2.5], "norms": [0.0, 1.0]},
}

# Output
SUPPORTED_FORMATS = ["csv", "markdown", "json"]
CSV_COLUMNS = [
    "s",
    "u",
    "rule",
    "r",
    "kappa_hat",
    "r_squared",
    "alpha_exponent",
    "flag",
]
SCHEMA_VERSION = "1.0"
FLOAT_DIGITS = 17
FLAG_UNCOVERED = "uncovered"

# CLI exit codes
EXIT_OK = 0
EXIT_STUDY_FAILURE = 1
EXIT_CONFIG_ERROR = 2

# Worker pool
ASYNC_MAX_Q_LEN = 1024
ERR_ASYNC_SCHEDULING = (
    "Unable to schedule study cell: the worker queue is full. "
    "Lower the number of repetitions or ladder points per run."
)
