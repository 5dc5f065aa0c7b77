"""
Cubic B-splines with an open (clamped) knot vector on a uniform grid of
``[0, T]``. The space has dimension ``n + 3`` for ``n`` intervals.
"""

import numpy as np
from scipy.interpolate import BSpline, make_interp_spline

from scaletik.errors import ParameterError
from scaletik.globals import SPLINE_DEGREE


#: Gauss order used for Gram matrices; products of two cubics have degree 6.
GRAM_GAUSS_POINTS = 4


def gauss_nodes(grid, n_points):
    """
    Gauss-Legendre nodes and weights on every interval of ``grid``.

    Return:
        tuple: ``(nodes, weights, local)`` with arrays of shape
        ``(n_intervals, n_points)``; ``local`` holds the reference positions
        in ``[0, 1]``
    """
    ref_nodes, ref_weights = np.polynomial.legendre.leggauss(n_points)
    local = 0.5 * (ref_nodes + 1.0)
    left = grid[:-1, None]
    width = np.diff(grid)[:, None]
    nodes = left + width * local[None, :]
    weights = 0.5 * width * ref_weights[None, :]
    return nodes, weights, np.broadcast_to(local, nodes.shape)


class SplineSpace(object):
    """
    Args:
        grid_n (int): number of intervals
        horizon (float): right end ``T`` of the interval
    """

    def __init__(self, grid_n, horizon):
        if int(grid_n) != grid_n or grid_n < 1:
            raise ParameterError("grid_n must be a positive integer, got {}".format(grid_n))
        if horizon <= 0:
            raise ParameterError("horizon must be positive, got {}".format(horizon))
        self.grid_n = int(grid_n)
        self.horizon = float(horizon)
        self.grid = np.linspace(0.0, self.horizon, self.grid_n + 1)
        self.step = self.horizon / self.grid_n
        k = SPLINE_DEGREE
        self.knots = np.concatenate(
            [np.zeros(k), self.grid, np.full(k, self.horizon)]
        )
        self._basis = BSpline(self.knots, np.eye(self.dim), k)
        self._mass = None
        self._stiffness = None

    def __repr__(self):
        return "<SplineSpace n={} T={}>".format(self.grid_n, self.horizon)

    @property
    def dim(self):
        return self.grid_n + SPLINE_DEGREE

    def basis_matrix(self, t, derivative=0):
        """Values (or derivatives) of all basis splines, shape ``(len(t), dim)``."""
        t = np.clip(np.atleast_1d(np.asarray(t, dtype=float)), 0.0, self.horizon)
        basis = self._basis if derivative == 0 else self._basis.derivative(derivative)
        values = basis(t.ravel())
        return values.reshape(t.shape + (self.dim,))

    def evaluate(self, control, t, derivative=0):
        return self.basis_matrix(t, derivative) @ np.asarray(control, dtype=float)

    def _gram(self, derivative):
        nodes, weights, _ = gauss_nodes(self.grid, GRAM_GAUSS_POINTS)
        B = self.basis_matrix(nodes.ravel(), derivative)
        return B.T @ (weights.ravel()[:, None] * B)

    @property
    def mass_gram(self):
        """L2 Gram matrix of the basis."""
        if self._mass is None:
            self._mass = self._gram(0)
        return self._mass

    @property
    def stiffness_gram(self):
        """Gram matrix of the first derivatives."""
        if self._stiffness is None:
            self._stiffness = self._gram(1)
        return self._stiffness

    @property
    def h1_gram(self):
        return self.mass_gram + self.stiffness_gram

    def interpolate(self, function, slopes):
        """
        Control coefficients of the cubic interpolant of ``function`` at the
        grid nodes with prescribed end slopes ``(f'(0), f'(T))``.
        """
        values = np.asarray(function(self.grid), dtype=float)
        spline = make_interp_spline(
            self.grid,
            values,
            k=SPLINE_DEGREE,
            bc_type=([(1, slopes[0])], [(1, slopes[1])]),
        )
        if spline.c.shape[0] != self.dim:
            raise ParameterError(
                "interpolant has {} coefficients, expected {}".format(
                    spline.c.shape[0], self.dim
                )
            )
        return np.asarray(spline.c, dtype=float)

    def constant(self, value):
        """B-splines form a partition of unity, so equal controls give a constant."""
        return np.full(self.dim, float(value))
