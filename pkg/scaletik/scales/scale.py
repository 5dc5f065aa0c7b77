"""
Defines :class:`SpectralScale` and :class:`ScaleElement`.

A scale is stored through the spectrum of its generator: every element is a
vector of spectral coordinates ``c_i`` that are orthonormal in ``X_0``, so the
norm of ``X_s`` is the weighted euclidean norm

.. math::

    \\|x\\|_{X_s}^2 = \\sum_i \\lambda_i^s c_i^2 .
"""

import numpy as np

from scaletik.errors import (
    DegenerateIntervalError,
    InvalidElementError,
    ParameterError,
    ScaleRangeError,
    UndefinedRatioError,
)
from scaletik.globals import INTERPOLATION_SLACK


class SpectralScale(object):
    """
    Diagonalized representation of the scale generator.

    Args:
        eigenvalues: positive, ascending eigenvalues ``lambda_i``
        to_spectral: callable mapping primal (nodal) coefficients to
            spectral coefficients
        from_spectral: inverse of ``to_spectral``
        label: text tag of the construction
    """

    def __init__(self, eigenvalues, to_spectral, from_spectral, label):
        eigenvalues = np.asarray(eigenvalues, dtype=float)
        if eigenvalues.ndim != 1 or eigenvalues.size == 0:
            raise ParameterError("eigenvalues must be a non-empty vector")
        if np.any(eigenvalues <= 0) or np.any(np.diff(eigenvalues) < 0):
            raise ParameterError("eigenvalues must be positive and ascending")
        eigenvalues.setflags(write=False)
        self.eigenvalues = eigenvalues
        self._to_spectral = to_spectral
        self._from_spectral = from_spectral
        self.label = label

    def __repr__(self):
        return "<SpectralScale {} dim={} lambda=[{:.4g}, {:.4g}]>".format(
            self.label, self.dim, self.eigenvalues[0], self.eigenvalues[-1]
        )

    @property
    def dim(self):
        return self.eigenvalues.size

    def to_spectral(self, values):
        return np.asarray(self._to_spectral(np.asarray(values, dtype=float)))

    def from_spectral(self, coeffs, *args, **kwargs):
        return np.asarray(
            self._from_spectral(np.asarray(coeffs, dtype=float), *args, **kwargs)
        )

    def element(self, coeffs):
        """Wrap spectral coefficients as a :class:`ScaleElement`."""
        return ScaleElement(coeffs, self)

    def from_primal(self, values):
        """Transform primal coefficients and wrap them."""
        return ScaleElement(self.to_spectral(values), self)

    def zero(self):
        return ScaleElement(np.zeros(self.dim), self)

    def powers(self, s):
        """
        Return ``lambda_i ** (s / 2)`` for all i.

        Raises:
            ScaleRangeError: naming the first index where the power is not
                finite
        """
        with np.errstate(over="ignore", invalid="ignore"):
            weights = self.eigenvalues ** (0.5 * s)
        bad = np.flatnonzero(~np.isfinite(weights) | (weights == 0))
        if bad.size:
            raise ScaleRangeError(bad[0], 0.5 * s)
        return weights


class ScaleElement(object):
    """An element of the scale stored as spectral coefficients."""

    def __init__(self, coeffs, scale):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.shape != (scale.dim,):
            raise InvalidElementError(
                "expected {} spectral coefficients, got shape {}".format(
                    scale.dim, coeffs.shape
                )
            )
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        self.scale = scale

    def __repr__(self):
        return "<ScaleElement {} dim={}>".format(self.scale.label, self.scale.dim)

    def _check_scale(self, other):
        if other.scale is not self.scale:
            raise ParameterError("cannot combine elements of different scales")

    def __add__(self, other):
        if not isinstance(other, ScaleElement):
            return NotImplemented
        self._check_scale(other)
        return ScaleElement(self.coeffs + other.coeffs, self.scale)

    def __sub__(self, other):
        if not isinstance(other, ScaleElement):
            return NotImplemented
        self._check_scale(other)
        return ScaleElement(self.coeffs - other.coeffs, self.scale)

    def __neg__(self):
        return ScaleElement(-self.coeffs, self.scale)

    def __mul__(self, factor):
        return ScaleElement(float(factor) * self.coeffs, self.scale)

    __rmul__ = __mul__

    def norm(self, s=0.0):
        return scale_norm(self, s)

    def power(self, s):
        return apply_power(self, s)

    def to_primal(self, *args, **kwargs):
        return self.scale.from_spectral(self.coeffs, *args, **kwargs)


def _check_finite(x):
    if not np.all(np.isfinite(x.coeffs)):
        bad = np.flatnonzero(~np.isfinite(x.coeffs))
        raise InvalidElementError(
            "element has non-finite coefficients at indices {}".format(
                bad[:5].tolist()
            )
        )


def apply_power(x, s):
    """
    Return the element with coefficients ``lambda_i ** (s / 2) * c_i``, so that
    ``scale_norm(x, s) == scale_norm(apply_power(x, s), 0)``.
    """
    _check_finite(x)
    if s == 0:
        return ScaleElement(x.coeffs, x.scale)
    return ScaleElement(x.scale.powers(s) * x.coeffs, x.scale)


def scale_norm(x, s=0.0):
    """Return the norm of ``x`` in ``X_s``."""
    return float(np.linalg.norm(apply_power(x, s).coeffs))


def interpolation_ratio(x, p, q, r):
    """
    Return the ratio of both sides of the interpolation inequality

    .. math::

        \\|x\\|_q \\le \\|x\\|_p^{(r-q)/(r-p)} \\|x\\|_r^{(q-p)/(r-p)},
        \\qquad p \\le q \\le r,

    which never exceeds one (up to round-off).

    Raises:
        DegenerateIntervalError: if ``p == r``
        UndefinedRatioError: if ``x`` is the zero element
    """
    if not p <= q <= r:
        raise ParameterError(
            "interpolation indices must satisfy p <= q <= r, got {}, {}, {}".format(
                p, q, r
            )
        )
    if p == r:
        raise DegenerateIntervalError("interpolation interval [p, r] is degenerate")
    norm_p = scale_norm(x, p)
    if norm_p == 0:
        raise UndefinedRatioError("interpolation ratio of the zero element")
    norm_q = scale_norm(x, q)
    norm_r = scale_norm(x, r)
    theta = (q - p) / (r - p)
    return norm_q / (norm_p ** (1.0 - theta) * norm_r**theta)


def satisfies_interpolation(x, p, q, r, slack=INTERPOLATION_SLACK):
    return interpolation_ratio(x, p, q, r) <= 1.0 + slack
