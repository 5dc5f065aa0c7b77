"""
Identification of the coefficient ``c`` in ``U' + c U = 0``, ``U(0) = U0``,
from observations of ``U`` on ``(0, T)``.

The state is continuous piecewise linear on a uniform grid and is determined
by a Petrov-Galerkin scheme with piecewise constant test functions: on each
interval ``[t_i, t_{i+1}]``

.. math::

    U_{i+1} - U_i + \\int_{t_i}^{t_{i+1}} c U \\, dt = 0 .

With ``a_i = int c phi_left`` and ``b_i = int c phi_right`` the interval
equation reads ``U_{i+1} (1 + b_i) = U_i (1 - a_i)``. Both moments are linear
in the spline controls of ``c`` and are evaluated by Gauss quadrature, which is
exact for the degree-4 integrand.
"""

from functools import lru_cache
import math

import numpy as np
import scipy.sparse

from cdislogging import get_logger

from scaletik.errors import ParameterError, SolverBreakdownError
from scaletik.globals import (
    DEFAULT_GAUSS_POINTS,
    DEFAULT_GRID,
    DEFAULT_HORIZON,
    DEFAULT_INITIAL_STATE,
    PARAM_ID_REFERENCE_U,
)
from scaletik.problems.base import InverseProblem
from scaletik.problems.splines import SplineSpace, gauss_nodes
from scaletik.scales import build_pencil_scale, scale_norm


logger = get_logger(__name__)

#: Number of points used to test minimizers for negative values.
MINIMUM_SAMPLES = 1000


class ParamIdSpec(object):
    """
    Args:
        T (float): horizon
        U0 (float): initial state, nonzero
        grid_n (int): number of grid intervals
        s (float): penalty index
        gauss_points (int): quadrature points per interval, at least 3
    """

    def __init__(
        self,
        T=DEFAULT_HORIZON,
        U0=DEFAULT_INITIAL_STATE,
        grid_n=DEFAULT_GRID,
        s=1.0,
        gauss_points=DEFAULT_GAUSS_POINTS,
    ):
        if T <= 0:
            raise ParameterError("T must be positive, got {}".format(T))
        if U0 == 0:
            raise ParameterError("the initial state U0 must be nonzero")
        if int(grid_n) != grid_n or grid_n < 1:
            raise ParameterError("grid_n must be a positive integer, got {}".format(grid_n))
        if gauss_points < 3:
            raise ParameterError(
                "gauss_points must be at least 3 to integrate degree-4 "
                "integrands exactly, got {}".format(gauss_points)
            )
        self.T = float(T)
        self.U0 = float(U0)
        self.grid_n = int(grid_n)
        self.s = float(s)
        self.gauss_points = int(gauss_points)

    def __repr__(self):
        return "ParamIdSpec(T={}, U0={}, grid_n={}, s={}, gauss_points={})".format(
            self.T, self.U0, self.grid_n, self.s, self.gauss_points
        )

    @property
    def step(self):
        return self.T / self.grid_n

    @property
    def grid(self):
        return np.linspace(0.0, self.T, self.grid_n + 1)


class CoefficientSpline(object):
    """Cubic B-spline coefficient on the grid of a :class:`ParamIdSpec`."""

    def __init__(self, control, grid_n, T):
        control = np.array(control, dtype=float)
        if control.shape != (grid_n + 3,):
            raise ParameterError(
                "expected {} spline controls, got shape {}".format(
                    grid_n + 3, control.shape
                )
            )
        self.control = control
        self.grid_n = int(grid_n)
        self.T = float(T)

    @classmethod
    def for_spec(cls, control, spec):
        return cls(control, spec.grid_n, spec.T)

    def __repr__(self):
        return "<CoefficientSpline n={} T={}>".format(self.grid_n, self.T)

    @property
    def space(self):
        return spline_space(self.grid_n, self.T)

    def __call__(self, t):
        return self.space.evaluate(self.control, t)

    def minimum(self, n_samples=MINIMUM_SAMPLES):
        return float(np.min(self(np.linspace(0.0, self.T, n_samples))))


class StateTrajectory(object):
    """Nodal values of a continuous piecewise linear function on the grid."""

    def __init__(self, nodal, initial):
        nodal = np.array(nodal, dtype=float)
        if nodal[0] != initial:
            raise ParameterError(
                "trajectory starts at {}, expected {}".format(nodal[0], initial)
            )
        self.nodal = nodal
        self.initial = initial

    def __repr__(self):
        return "<StateTrajectory n={}>".format(self.nodal.size - 1)

    def __len__(self):
        return self.nodal.size


@lru_cache(maxsize=16)
def spline_space(grid_n, T):
    return SplineSpace(grid_n, T)


@lru_cache(maxsize=16)
def interval_moments(grid_n, T, gauss_points):
    """
    Matrices ``P`` and ``Q`` with ``a = P @ control`` and ``b = Q @ control``,
    the integrals of ``c`` against the left and right hat functions of every
    interval.
    """
    space = spline_space(grid_n, T)
    nodes, weights, local = gauss_nodes(space.grid, gauss_points)
    basis = space.basis_matrix(nodes)
    P = np.einsum("iq,iqj->ij", weights * (1.0 - local), basis)
    Q = np.einsum("iq,iqj->ij", weights * local, basis)
    P.setflags(write=False)
    Q.setflags(write=False)
    return P, Q


def _moments(spec):
    return interval_moments(spec.grid_n, spec.T, spec.gauss_points)


@lru_cache(maxsize=16)
def observation_mass(grid_n, T):
    """Mass matrix of the piecewise linear hat functions on the grid."""
    h = T / grid_n
    main = np.full(grid_n + 1, 2.0 * h / 3.0)
    main[0] = main[-1] = h / 3.0
    off = np.full(grid_n, h / 6.0)
    return scipy.sparse.diags([off, main, off], [-1, 0, 1], format="csr")


def _control(c, spec):
    control = c.control if isinstance(c, CoefficientSpline) else np.asarray(c, dtype=float)
    if control.shape != (spec.grid_n + 3,):
        raise ParameterError(
            "expected {} spline controls, got shape {}".format(
                spec.grid_n + 3, control.shape
            )
        )
    return control


def _state(control, spec):
    P, Q = _moments(spec)
    a = P @ control
    b = Q @ control
    denominators = 1.0 + b
    singular = np.flatnonzero(denominators <= 0)
    if singular.size:
        raise SolverBreakdownError(singular[0], denominators[singular[0]])
    nodal = np.empty(spec.grid_n + 1)
    nodal[0] = spec.U0
    nodal[1:] = spec.U0 * np.cumprod((1.0 - a) / denominators)
    return nodal, a, b


def _linearized(nodal, a, b, dP, dQ):
    """
    Run the differentiated interval recursion
    ``W_{i+1} (1 + b_i) = W_i (1 - a_i) - U_i dP_i - U_{i+1} dQ_i``.
    ``dP`` and ``dQ`` may carry a trailing axis of directions.
    """
    W = np.zeros((nodal.size,) + dP.shape[1:])
    for i in range(nodal.size - 1):
        W[i + 1] = (
            W[i] * (1.0 - a[i]) - nodal[i] * dP[i] - nodal[i + 1] * dQ[i]
        ) / (1.0 + b[i])
    return W


def solve_state(c, spec):
    """
    Solve the Petrov-Galerkin interval equations for ``U``.

    Raises:
        SolverBreakdownError: if ``1 + int c phi_right <= 0`` on an interval
    """
    nodal, _, _ = _state(_control(c, spec), spec)
    return StateTrajectory(nodal, spec.U0)


def forward(c, spec):
    """The state regarded as an element of ``L^2(0, T)``."""
    return solve_state(c, spec)


def observation_norm(y, spec):
    y = y.nodal if isinstance(y, StateTrajectory) else np.asarray(y, dtype=float)
    return float(math.sqrt(max(y @ (observation_mass(spec.grid_n, spec.T) @ y), 0.0)))


def jacobian_apply(c, h, spec):
    """Derivative ``W = F'(c) h``, solving ``W' + c W = -h U`` with ``W(0) = 0``."""
    control = _control(c, spec)
    direction = _control(h, spec)
    nodal, a, b = _state(control, spec)
    P, Q = _moments(spec)
    W = _linearized(nodal, a, b, P @ direction, Q @ direction)
    return StateTrajectory(W, 0.0)


def jacobian_matrix(c, spec):
    """The derivative of the discrete forward map, shape ``(n + 1, n + 3)``."""
    control = _control(c, spec)
    nodal, a, b = _state(control, spec)
    P, Q = _moments(spec)
    return _linearized(nodal, a, b, P, Q)


def jacobian_adjoint(c, r, spec):
    """
    Gradient-space image ``J^T M r`` of an observation ``r``, the exact
    transpose of :func:`jacobian_apply` in the observation inner product.
    """
    r = r.nodal if isinstance(r, StateTrajectory) else np.asarray(r, dtype=float)
    return jacobian_matrix(c, spec).T @ (observation_mass(spec.grid_n, spec.T) @ r)


def _reference_function(kind, T):
    if kind == "hat":
        return (lambda t: np.minimum(t, T - t)), (1.0, -1.0)
    if kind == "t_sqrt_t":
        return (lambda t: t * np.sqrt(t)), (0.0, 1.5 * math.sqrt(T))
    if kind == "parabola":
        return (lambda t: t * (T - t)), (T, -T)
    raise ParameterError(
        "unknown reference coefficient {}; expected one of {}".format(
            kind, sorted(PARAM_ID_REFERENCE_U)
        )
    )


def reference_coefficient(kind, spec):
    """
    Spline interpolant of a reference coefficient.

    Return:
        tuple: ``(CoefficientSpline, u_max)``
    """
    function, slopes = _reference_function(kind, spec.T)
    control = spline_space(spec.grid_n, spec.T).interpolate(function, slopes)
    return CoefficientSpline.for_spec(control, spec), PARAM_ID_REFERENCE_U[kind]


class ParamIdProblem(InverseProblem):
    """
    Parameter identification as an :class:`InverseProblem` over spline
    controls. Unknowns are measured in the pencil scale of the spline space
    (``X_1`` is the discrete ``H^1``), observations in ``L^2``.
    """

    linear = False
    name = "param-id"

    def __init__(self, spec):
        self.spec = spec
        self.space = spline_space(spec.grid_n, spec.T)
        self.scale = build_pencil_scale(self.space.mass_gram, self.space.h1_gram)
        self._mass = observation_mass(spec.grid_n, spec.T).toarray()
        self._penalty_grams = {}

    def __repr__(self):
        return "<ParamIdProblem {!r}>".format(self.spec)

    @property
    def dim(self):
        return self.space.dim

    def coefficient(self, x):
        return CoefficientSpline.for_spec(x, self.spec)

    def forward(self, x):
        return solve_state(x, self.spec).nodal

    def data_norm(self, y):
        y = np.asarray(y, dtype=float)
        return float(math.sqrt(max(y @ self._mass @ y, 0.0)))

    def norm(self, x, r):
        return scale_norm(self.scale.from_primal(x), r)

    def observation_gram(self):
        return self._mass

    def penalty_gram(self, s):
        """``M Phi diag(lambda^s) Phi^T M`` for the spline mass matrix ``M``."""
        if s not in self._penalty_grams:
            projector = self.scale.eigenvectors.T @ self.scale.mass_gram
            weights = self.scale.powers(s) ** 2
            gram = projector.T @ (weights[:, None] * projector)
            self._penalty_grams[s] = 0.5 * (gram + gram.T)
        return self._penalty_grams[s]

    def jacobian_matrix(self, x):
        return jacobian_matrix(x, self.spec)

    def jacobian_adjoint(self, x, r):
        return jacobian_adjoint(x, r, self.spec)

    def initial_guess(self, data):
        """
        Constant coefficient fitted to the end value of the data:
        ``-(log|U(T)| - log|U0|) / T``.
        """
        end = float(np.asarray(data)[-1])
        if end * self.spec.U0 <= 0:
            logger.warning(
                "observed end state %.3e has the wrong sign; starting from c = 0", end
            )
            return self.space.constant(0.0)
        value = -(math.log(abs(end)) - math.log(abs(self.spec.U0))) / self.spec.T
        return self.space.constant(value)

    def reference(self, kind):
        coefficient, u_max = reference_coefficient(kind, self.spec)
        return coefficient.control, u_max

    def check_minimizer(self, x):
        minimum = self.coefficient(x).minimum()
        if minimum < 0:
            message = "minimizer leaves the domain c >= 0 (min {:.3e})".format(minimum)
            logger.warning(message)
            return [message]
        return []

    def stability_ratio(self, c1, c2, s):
        """
        ``||c1 - c2||_0 / ||F(c1) - F(c2)||_0^{s/(s+1)}``, the quantity bounded by
        the conditional stability estimate.
        """
        difference = self.norm(np.asarray(c1) - np.asarray(c2), 0.0)
        data_gap = self.data_norm(self.forward(c1) - self.forward(c2))
        if data_gap == 0:
            raise ParameterError("coefficients produce identical observations")
        return difference / data_gap ** (s / (s + 1.0))
