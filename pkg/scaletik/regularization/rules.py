"""
Parameter choice rules and the rate predictions that go with them.
"""

import math

from cdislogging import get_logger

from scaletik.errors import DegenerateExponentError, NoStopError, ParameterError
from scaletik.globals import (
    DISCREPANCY_ALPHA_FACTOR,
    DISCREPANCY_MAX_STEPS,
    DISCREPANCY_TAU,
)
from scaletik.regularization.tikhonov import TikhonovSetup, minimize


logger = get_logger(__name__)


def _check_delta(delta):
    if not delta > 0:
        raise ParameterError("delta must be positive, got {}".format(delta))


def simple_alpha(delta):
    """``alpha = delta**2``."""
    _check_delta(delta)
    return delta**2


def _denominator(sp):
    if sp.u + sp.a == 0:
        raise DegenerateExponentError("u + a vanishes for {!r}".format(sp))
    return sp.u + sp.a


def apriori_exponent(sp):
    """Exponent ``2 - 2 gamma (u - s) / (u + a)`` of the a-priori rule."""
    return 2.0 - 2.0 * sp.gamma * (sp.u - sp.s) / _denominator(sp)


def apriori_alpha(delta, sp):
    """
    ``alpha = delta ** (2 - 2 gamma (u - s) / (u + a))``. Parameters outside
    ``-a <= s <= u <= 2s + a`` are logged and used anyway.
    """
    _check_delta(delta)
    exponent = apriori_exponent(sp)
    sp.check("a-priori rule", include_norm=False)
    return delta**exponent


def theoretical_rate(sp):
    """
    Predicted exponent ``gamma (u - r) / (u + a)`` of the error in ``X_r``.
    Parameters outside ``-a <= r <= s <= u`` are logged; callers flag them
    through :meth:`StabilityParams.rate_violations`.
    """
    rate = sp.gamma * (sp.u - sp.r) / _denominator(sp)
    sp.check("rate prediction")
    return rate


def noise_to_alpha_ratio(delta, sp):
    """``delta**2 / alpha`` for the a-priori rule."""
    return delta**2 / apriori_alpha(delta, sp)


def simple_rule_bound(M):
    """Residual and penalty bound ``sqrt(2 + M**2)`` for ``alpha = delta**2``."""
    return math.sqrt(2.0 + M**2)


def lemma_residual_bound(tau):
    """Residual bound in units of delta when ``alpha <= tau delta**2 / M**2``."""
    return math.sqrt(2.0 + tau)


def lemma_norm_bound(tau, M):
    """Penalty norm bound when ``alpha >= tau delta**2 / M**2``."""
    return math.sqrt(1.0 + 2.0 / tau) * M


def discrepancy_alpha_floor(delta, M):
    """Lower bound ``7 delta**2 / M**2`` of the parameter chosen by the discrepancy rule."""
    return DISCREPANCY_ALPHA_FACTOR * delta**2 / M**2


class DiscrepancyResult(object):
    """
    Outcome of :func:`discrepancy_run`.

    Attributes:
        n_star (int): first ladder index with residual ``<= tau delta``
        alpha (float): ``2 ** -n_star``
        x: minimizer at ``n_star``
        report (MinimizeReport): certificate of that minimizer
        history (list): one entry per tried index with ``n``, ``alpha``,
            ``residual`` and ``functional_value``
    """

    def __init__(self, n_star, alpha, x, report, history):
        self.n_star = n_star
        self.alpha = alpha
        self.x = x
        self.report = report
        self.history = history

    def __iter__(self):
        return iter((self.n_star, self.alpha, self.x, self.history))

    def __repr__(self):
        return "<DiscrepancyResult n*={} alpha={:.3e}>".format(self.n_star, self.alpha)


def discrepancy_run(
    problem,
    data,
    delta,
    s,
    tau=DISCREPANCY_TAU,
    max_steps=DISCREPANCY_MAX_STEPS,
    x0=None,
):
    """
    Walk the ladder ``alpha_n = 2 ** -n`` for ``n = 0, 1, ...`` and stop at the
    first ``n`` whose minimizer has residual ``<= tau delta``. Each minimization
    is warm-started from the previous minimizer.

    Raises:
        NoStopError: if no index up to ``max_steps`` satisfies the criterion
    """
    _check_delta(delta)
    if not tau > 0:
        raise ParameterError("tau must be positive, got {}".format(tau))
    if max_steps < 0:
        raise ParameterError("max_steps must be >= 0, got {}".format(max_steps))
    threshold = tau * delta
    setup = TikhonovSetup(problem, 1.0, s, data, delta)
    x = x0 if x0 is not None else problem.initial_guess(setup.data)
    history = []
    residual = None
    for n in range(max_steps + 1):
        alpha = 2.0**-n
        x, report = minimize(setup.with_alpha(alpha), x)
        residual = report.residual_norm
        history.append(
            {
                "n": n,
                "alpha": alpha,
                "residual": residual,
                "functional_value": report.functional_value,
            }
        )
        logger.debug(
            "discrepancy n=%d alpha=%.3e residual=%.6e threshold=%.6e",
            n,
            alpha,
            residual,
            threshold,
        )
        if residual <= threshold:
            return DiscrepancyResult(n, alpha, x, report, history)
    raise NoStopError(max_steps, residual, threshold)
