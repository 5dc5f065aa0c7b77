"""
Periodic data smoothing: recover ``f`` on ``(0, 2 pi)`` from data ``f^delta``
measured in ``H^{-1}_per``. The forward operator is the identity embedding, so
the Tikhonov minimizer is a spectral filter.
"""

import math

import numpy as np
import scipy.special

from cdislogging import get_logger

from scaletik.errors import ParameterError
from scaletik.globals import (
    DEFAULT_TRUNCATION,
    FOURIER_SCALE_LABEL,
    PERIOD,
    SMOOTHING_REFERENCE_U,
    STABILITY_VARIANTS,
    TAIL_OVERSAMPLING,
)
from scaletik.problems.base import InverseProblem
from scaletik.scales import ScaleElement, build_fourier_scale, scale_norm


logger = get_logger(__name__)

#: Index of the data-space norm.
DATA_INDEX = -1.0


class PeriodicSignal(object):
    """A 2 pi-periodic signal held as an element of a Fourier scale."""

    def __init__(self, element):
        if element.scale.label != FOURIER_SCALE_LABEL:
            raise ParameterError(
                "periodic signals live on a {} scale, got {}".format(
                    FOURIER_SCALE_LABEL, element.scale.label
                )
            )
        self.element = element

    def __repr__(self):
        return "<PeriodicSignal K={}>".format(self.max_wavenumber)

    @property
    def scale(self):
        return self.element.scale

    @property
    def coeffs(self):
        return self.element.coeffs

    @property
    def max_wavenumber(self):
        return (self.scale.dim - 1) // 2

    def norm(self, s=0.0):
        return scale_norm(self.element, s)


class SmoothingSpec(object):
    """
    Args:
        K (int): truncation wavenumber
        s (float): penalty index
        stability_variant (str): ``lipschitz_a1`` or ``hoelder_a0``
    """

    def __init__(self, K=DEFAULT_TRUNCATION, s=0.0, stability_variant="lipschitz_a1"):
        if int(K) != K or K < 1:
            raise ParameterError("K must be a positive integer, got {}".format(K))
        if stability_variant not in STABILITY_VARIANTS:
            raise ParameterError(
                "unknown stability variant {}; expected one of {}".format(
                    stability_variant, sorted(STABILITY_VARIANTS)
                )
            )
        if stability_variant == "hoelder_a0" and s < 1:
            raise ParameterError(
                "the hoelder_a0 variant needs s >= 1, got {}".format(s)
            )
        self.K = int(K)
        self.s = float(s)
        self.stability_variant = stability_variant

    def __repr__(self):
        return "SmoothingSpec(K={}, s={}, stability_variant={!r})".format(
            self.K, self.s, self.stability_variant
        )

    @property
    def a(self):
        return STABILITY_VARIANTS[self.stability_variant][0]

    @property
    def gamma(self):
        return STABILITY_VARIANTS[self.stability_variant][1]


def forward(f):
    """The identity embedding of ``L^2`` into ``H^{-1}``."""
    return PeriodicSignal(ScaleElement(f.coeffs, f.scale))


def y_norm(g):
    return scale_norm(g.element, DATA_INDEX)


def filter_factors(scale, alpha, s):
    """Spectral filter ``1 / (1 + alpha lambda^{s+1})`` of the closed form."""
    if alpha < 0:
        raise ParameterError("alpha must be >= 0, got {}".format(alpha))
    if alpha == 0:
        return np.ones(scale.dim)
    return 1.0 / (1.0 + alpha * scale.powers(2.0 * (s + 1.0)))


def tikhonov_closed_form(data, alpha, s):
    """
    Exact minimizer of ``||f - d||_{-1}^2 + alpha ||f||_s^2``: coefficient-wise
    ``f_k = d_k / (1 + alpha (1 + k^2)^{s+1})``.
    """
    return PeriodicSignal(
        ScaleElement(filter_factors(data.scale, alpha, s) * data.coeffs, data.scale)
    )


def _wavenumbers(K):
    return np.arange(1, K + 1, dtype=float)


def analytic_coefficients(kind, k):
    """
    Orthonormal cosine and sine coefficients of a reference signal on
    ``(0, 2 pi)`` at wavenumbers ``k >= 1``, plus the mean coefficient.

    Return:
        tuple: ``(mean_coeff, cos_coeffs, sin_coeffs)``
    """
    k = np.asarray(k, dtype=float)
    odd = np.mod(k, 2) == 1
    sign = np.where(odd, -1.0, 1.0)
    root_pi = math.sqrt(math.pi)
    root_period = math.sqrt(PERIOD)
    if kind == "step":
        # 0 on (0, pi), 1 on (pi, 2 pi)
        mean = math.pi / root_period
        cos = np.zeros_like(k)
        sin = np.where(odd, -2.0 / (k * root_pi), 0.0)
    elif kind == "sqrt_bump":
        # sqrt(t (2 pi - t)) = sqrt(pi^2 - (t - pi)^2)
        mean = 0.5 * math.pi**3 / root_period
        cos = sign * math.pi**1.5 * scipy.special.j1(k * math.pi) / k
        sin = np.zeros_like(k)
    elif kind == "hat":
        # t on (0, pi), 2 pi - t on (pi, 2 pi)
        mean = math.pi**2 / root_period
        cos = np.where(odd, -4.0 / (k**2 * root_pi), 0.0)
        sin = np.zeros_like(k)
    else:
        raise ParameterError(
            "unknown reference solution {}; expected one of {}".format(
                kind, sorted(SMOOTHING_REFERENCE_U)
            )
        )
    return mean, cos, sin


def reference_solution(kind, K, scale=None):
    """
    Truncated Fourier expansion of a reference signal, computed from its
    analytic Fourier integrals.

    Return:
        tuple: ``(PeriodicSignal, u_max)``; the signal lies in ``H^u`` for all
        ``u < u_max``
    """
    if kind not in SMOOTHING_REFERENCE_U:
        raise ParameterError(
            "unknown reference solution {}; expected one of {}".format(
                kind, sorted(SMOOTHING_REFERENCE_U)
            )
        )
    scale = scale or build_fourier_scale(K)
    if scale.dim != 2 * K + 1:
        raise ParameterError("scale dimension does not match K={}".format(K))
    mean, cos, sin = analytic_coefficients(kind, _wavenumbers(K))
    coeffs = np.empty(2 * K + 1)
    coeffs[0] = mean
    coeffs[1::2] = cos
    coeffs[2::2] = sin
    return PeriodicSignal(ScaleElement(coeffs, scale)), SMOOTHING_REFERENCE_U[kind]


def truncation_error(kind, K, oversampling=TAIL_OVERSAMPLING):
    """
    Data-space norm of the expansion tail between ``K`` and ``oversampling * K``.
    """
    k = np.arange(K + 1, oversampling * K + 1, dtype=float)
    _, cos, sin = analytic_coefficients(kind, k)
    return float(np.sqrt(np.sum((cos**2 + sin**2) / (1.0 + k**2))))


def sample(signal, n_nodes):
    """Nodal values of ``signal`` on the grid ``t_j = 2 pi j / n_nodes``."""
    return signal.element.to_primal(n_nodes)


class SmoothingProblem(InverseProblem):
    """
    Smoothing as an :class:`InverseProblem` over spectral coefficient vectors.
    Observations and unknowns share the Fourier scale.
    """

    linear = True
    name = "smoothing"

    def __init__(self, spec):
        self.spec = spec
        self.scale = build_fourier_scale(spec.K)
        self._data_weights = self.scale.powers(DATA_INDEX) ** 2
        self._penalty_weights = {}

    def __repr__(self):
        return "<SmoothingProblem {!r}>".format(self.spec)

    @property
    def dim(self):
        return self.scale.dim

    def signal(self, coeffs):
        return PeriodicSignal(ScaleElement(coeffs, self.scale))

    def forward(self, x):
        return np.array(x, dtype=float)

    def data_norm(self, y):
        return float(np.sqrt(np.sum(self._data_weights * np.asarray(y) ** 2)))

    def norm(self, x, r):
        return scale_norm(ScaleElement(x, self.scale), r)

    def penalty_weights(self, s):
        if s not in self._penalty_weights:
            self._penalty_weights[s] = self.scale.powers(s) ** 2
        return self._penalty_weights[s]

    def observation_gram(self):
        return np.diag(self._data_weights)

    def penalty_gram(self, s):
        return np.diag(self.penalty_weights(s))

    def jacobian_matrix(self, x):
        return np.eye(self.dim)

    def closed_form(self, data, alpha, s):
        return filter_factors(self.scale, alpha, s) * np.asarray(data, dtype=float)

    def initial_guess(self, data):
        return np.zeros(self.dim)

    def reference(self, kind):
        signal, u_max = reference_solution(kind, self.spec.K, self.scale)
        return np.array(signal.coeffs), u_max

    def resolution_error(self, kind):
        return truncation_error(kind, self.spec.K)
