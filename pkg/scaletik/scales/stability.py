"""
Parameters of the conditional stability estimate

.. math::

    \\|x_1 - x_2\\|_{X_{-a}} \\le R(\\rho) \\|F(x_1) - F(x_2)\\|_Y^\\gamma

together with the smoothness indices that enter the rate theorems.
"""

from cdislogging import get_logger

from scaletik.errors import ParameterError
from scaletik.globals import STABILITY_VARIANTS


logger = get_logger(__name__)


class StabilityParams(object):
    """
    Args:
        a (float): degree of ill-posedness, ``a >= 0``
        gamma (float): stability exponent in ``(0, 1]``
        s (float): penalty smoothness
        u (float): smoothness of the true solution
        r (float): index of the norm the error is measured in
    """

    def __init__(self, a, gamma, s, u, r=0.0):
        if a < 0:
            raise ParameterError("degree of ill-posedness a must be >= 0, got {}".format(a))
        if not 0 < gamma <= 1:
            raise ParameterError("gamma must lie in (0, 1], got {}".format(gamma))
        self.a = float(a)
        self.gamma = float(gamma)
        self.s = float(s)
        self.u = float(u)
        self.r = float(r)

    def __repr__(self):
        return "StabilityParams(a={}, gamma={}, s={}, u={}, r={})".format(
            self.a, self.gamma, self.s, self.u, self.r
        )

    def __eq__(self, other):
        return isinstance(other, StabilityParams) and self.as_dict() == other.as_dict()

    def as_dict(self):
        return {"a": self.a, "gamma": self.gamma, "s": self.s, "u": self.u, "r": self.r}

    def with_norm(self, r):
        return StabilityParams(self.a, self.gamma, self.s, self.u, r)

    @classmethod
    def for_smoothing(cls, variant, s, u, r=0.0):
        """Build the parameters of the smoothing problem's stability variant."""
        try:
            a, gamma = STABILITY_VARIANTS[variant]
        except KeyError:
            raise ParameterError(
                "unknown stability variant {}; expected one of {}".format(
                    variant, sorted(STABILITY_VARIANTS)
                )
            )
        return cls(a, gamma, s, u, r)

    @classmethod
    def for_param_id(cls, s, u, r=0.0):
        """Parameter identification: ``a = 0`` and ``gamma = s / (s + 1)``."""
        if s <= 0:
            raise ParameterError("parameter identification needs s > 0, got {}".format(s))
        return cls(0.0, s / (s + 1.0), s, u, r)

    def theory_violations(self):
        """Violated conditions among ``-a <= s <= u <= 2s + a``."""
        violations = []
        if self.s < -self.a:
            violations.append("-a <= s")
        if self.u < self.s:
            violations.append("s <= u")
        if self.u > 2.0 * self.s + self.a:
            violations.append("u <= 2s + a")
        return violations

    def rate_violations(self):
        """
        Violated conditions of the rate theorems, including the range
        ``-a <= r <= s`` of the reported norm.
        """
        violations = self.theory_violations()
        if not -self.a <= self.r <= self.s:
            violations.append("-a <= r <= s")
        return violations

    def check(self, context, include_norm=True):
        """Log and return the violated conditions."""
        violations = (
            self.rate_violations() if include_norm else self.theory_violations()
        )
        if violations:
            logger.warning(
                "%s: %r violates %s", context, self, ", ".join(violations)
            )
        return violations


def hoelder_exponent(a, s, q):
    """
    Exponent of the Hoelder stability that a two-sided estimate in ``X_{-a}``
    yields in ``X_{-q}`` by interpolation against an ``X_s`` bound:
    ``(s + q) / (s + a)``.
    """
    if not -a <= -q <= s:
        raise ParameterError(
            "need -a <= -q <= s, got a={}, q={}, s={}".format(a, q, s)
        )
    if s + a == 0:
        raise ParameterError("s + a must be nonzero")
    return (s + q) / (s + a)
