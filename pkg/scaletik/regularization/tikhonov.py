"""
The Tikhonov functional

.. math::

    T(x; \\alpha, y^\\delta) = \\|F(x) - y^\\delta\\|_Y^2 + \\alpha \\|x\\|_{X_s}^2

and its approximate minimization: the spectral closed form for linear
problems, damped Gauss-Newton for nonlinear ones.
"""

import numpy as np
import scipy.linalg

from cdislogging import get_logger

from scaletik.errors import (
    NumericError,
    ParameterError,
    SolverBreakdownError,
    StagnationError,
)
from scaletik.globals import (
    GN_DECREASE_DIVISOR,
    GN_GRADIENT_TOL,
    GN_MAX_HALVINGS,
    GN_MAX_ITERATIONS,
    GN_PREDICTED_RTOL,
)


logger = get_logger(__name__)


class TikhonovSetup(object):
    """
    Args:
        problem (InverseProblem): forward problem
        alpha (float): regularization parameter, ``>= 0``
        s (float): penalty index
        data: observation ``y^delta``
        delta (float): noise level, ``>= 0``
    """

    def __init__(self, problem, alpha, s, data, delta):
        if alpha < 0:
            raise ParameterError("alpha must be >= 0, got {}".format(alpha))
        if delta < 0:
            raise ParameterError("delta must be >= 0, got {}".format(delta))
        self.problem = problem
        self.alpha = float(alpha)
        self.s = float(s)
        self.data = np.asarray(data, dtype=float)
        self.delta = float(delta)

    def __repr__(self):
        return "<TikhonovSetup {} alpha={:.3e} s={} delta={:.3e}>".format(
            self.problem.name, self.alpha, self.s, self.delta
        )

    def with_alpha(self, alpha):
        return TikhonovSetup(self.problem, alpha, self.s, self.data, self.delta)


class MinimizeReport(object):
    """Certificate of an approximate minimization."""

    def __init__(
        self,
        alpha,
        residual_norm,
        penalty_norm,
        iterations=0,
        gradient_norm=0.0,
        slack_certificate=0.0,
        warnings=None,
        history=None,
    ):
        self.alpha = alpha
        self.residual_norm = residual_norm
        self.penalty_norm = penalty_norm
        self.iterations = iterations
        self.gradient_norm = gradient_norm
        self.slack_certificate = slack_certificate
        self.warnings = warnings or []
        self.history = history or []

    def __repr__(self):
        return (
            "<MinimizeReport value={:.6e} residual={:.3e} penalty={:.3e} "
            "iterations={}>".format(
                self.functional_value,
                self.residual_norm,
                self.penalty_norm,
                self.iterations,
            )
        )

    @property
    def functional_value(self):
        return self.residual_norm**2 + self.alpha * self.penalty_norm**2

    def as_dict(self):
        return {
            "functional_value": self.functional_value,
            "residual_norm": self.residual_norm,
            "penalty_norm": self.penalty_norm,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "slack_certificate": self.slack_certificate,
            "warnings": list(self.warnings),
        }


def _parts(x, setup):
    problem = setup.problem
    residual = setup.data - problem.forward(x)
    return residual, problem.data_norm(residual), problem.penalty_norm(x, setup.s)


def functional_value(x, setup):
    """Value of the Tikhonov functional at ``x``."""
    _, residual_norm, penalty_norm = _parts(x, setup)
    return residual_norm**2 + setup.alpha * penalty_norm**2


def _report(x, setup, **kwargs):
    _, residual_norm, penalty_norm = _parts(x, setup)
    report = MinimizeReport(setup.alpha, residual_norm, penalty_norm, **kwargs)
    report.warnings.extend(setup.problem.check_minimizer(x))
    return report


def _minimize_linear(setup):
    problem = setup.problem
    x = problem.closed_form(setup.data, setup.alpha, setup.s)
    residual = setup.data - problem.forward(x)
    gradient = problem.jacobian_matrix(x).T @ (
        problem.observation_gram() @ residual
    ) - setup.alpha * (problem.penalty_gram(setup.s) @ x)
    report = _report(x, setup, gradient_norm=2.0 * float(np.linalg.norm(gradient)))
    report.history.append(report.functional_value)
    return x, report


def _evaluate(x, setup):
    try:
        return functional_value(x, setup)
    except SolverBreakdownError:
        return np.inf


def _descent_direction(x, setup, M, S):
    """``J^T M (y - F(x)) - S x``, half the negative gradient, with ``J`` and ``M J``."""
    problem = setup.problem
    J = problem.jacobian_matrix(x)
    MJ = M @ J
    return J, MJ, MJ.T @ (setup.data - problem.forward(x)) - S @ x


def gauss_newton(setup, x0):
    """Damped Gauss-Newton from ``x0``; see :func:`minimize`."""
    problem = setup.problem
    if setup.alpha <= 0:
        raise ParameterError(
            "Gauss-Newton needs alpha > 0 for solvable normal equations"
        )
    M = problem.observation_gram()
    S = setup.alpha * problem.penalty_gram(setup.s)
    decrease_tol = setup.delta**2 / GN_DECREASE_DIVISOR
    data_scale = problem.data_norm(setup.data) ** 2

    x = np.array(x0, dtype=float)
    value = functional_value(x, setup)
    history = [value]
    slack = 0.0
    gradient_norm = np.inf
    gradient_at = None
    iterations = 0

    while iterations < GN_MAX_ITERATIONS:
        J, MJ, rhs = _descent_direction(x, setup, M, S)
        gradient_norm, gradient_at = 2.0 * float(np.linalg.norm(rhs)), x
        if gradient_norm < GN_GRADIENT_TOL:
            break
        try:
            step = scipy.linalg.solve(J.T @ MJ + S, rhs, assume_a="sym")
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NumericError(
                "Gauss-Newton normal equations failed: {}".format(e),
                json={"iteration": iterations},
            )
        predicted = float(rhs @ step)
        if predicted <= GN_PREDICTED_RTOL * max(value, data_scale):
            trial_value = _evaluate(x + step, setup)
            if trial_value <= value:
                x, value = x + step, trial_value
                history.append(value)
            slack = max(predicted, 0.0)
            break

        length = 1.0
        for _ in range(GN_MAX_HALVINGS + 1):
            trial = x + length * step
            trial_value = _evaluate(trial, setup)
            if trial_value < value:
                break
            length *= 0.5
        else:
            report = _report(
                x,
                setup,
                iterations=iterations,
                gradient_norm=gradient_norm,
                slack_certificate=predicted,
                history=history,
            )
            raise StagnationError(report)

        iterations += 1
        slack = value - trial_value
        logger.debug(
            "gauss-newton %d: value %.10e step %.3g decrease %.3e",
            iterations,
            trial_value,
            length,
            slack,
        )
        x, value = trial, trial_value
        history.append(value)
        if slack < decrease_tol:
            break

    if gradient_at is not x:
        gradient_norm = 2.0 * float(np.linalg.norm(_descent_direction(x, setup, M, S)[2]))
    return x, _report(
        x,
        setup,
        iterations=iterations,
        gradient_norm=gradient_norm,
        slack_certificate=slack,
        history=history,
    )


def minimize(setup, x0=None):
    """
    Compute an approximate minimizer of the Tikhonov functional.

    Linear problems use their exact spectral minimizer. Nonlinear problems run
    damped Gauss-Newton: each step solves

    .. math::

        (J^T M J + \\alpha S_s) \\Delta = J^T M (y^\\delta - F(x)) - \\alpha S_s x

    followed by backtracking (up to 30 halvings) until the functional
    decreases. Iteration stops when a step decreases the functional by less
    than ``delta**2 / 10``, when the gradient vanishes, or after 100 steps.

    Return:
        tuple: ``(x, MinimizeReport)``

    Raises:
        StagnationError: if backtracking finds no decrease
        NumericError: if the normal equations cannot be solved
    """
    if setup.problem.linear:
        return _minimize_linear(setup)
    if x0 is None:
        x0 = setup.problem.initial_guess(setup.data)
    return gauss_newton(setup, x0)
