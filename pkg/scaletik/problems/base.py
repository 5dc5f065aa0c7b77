"""
Interface the regularizer and the experiment harness use to talk to a model
problem. Unknowns and observations are plain coefficient vectors; each problem
knows which norms they carry.
"""

from abc import ABC, abstractmethod


class InverseProblem(ABC):
    #: ``True`` when ``forward`` is linear and ``closed_form`` is available.
    linear = False
    name = None

    @property
    @abstractmethod
    def dim(self):
        """Dimension of the unknown."""

    @abstractmethod
    def forward(self, x):
        """Observation ``F(x)``."""

    @abstractmethod
    def data_norm(self, y):
        """Norm of an observation in the data space ``Y``."""

    @abstractmethod
    def norm(self, x, r):
        """Norm of an unknown in ``X_r``."""

    def penalty_norm(self, x, s):
        return self.norm(x, s)

    @abstractmethod
    def observation_gram(self):
        """Matrix ``M`` with ``data_norm(y)**2 == y @ M @ y``."""

    @abstractmethod
    def penalty_gram(self, s):
        """Matrix ``S_s`` with ``norm(x, s)**2 == x @ S_s @ x``."""

    @abstractmethod
    def jacobian_matrix(self, x):
        """Derivative of ``forward`` at ``x`` as an explicit matrix."""

    @abstractmethod
    def initial_guess(self, data):
        """Starting point of the first minimization on a parameter ladder."""

    @abstractmethod
    def reference(self, kind):
        """Return ``(x_dagger, u_max)`` for a named reference solution."""

    def closed_form(self, data, alpha, s):
        raise NotImplementedError("{} has no closed-form minimizer".format(self.name))

    def resolution_error(self, kind):
        """Discretization error of the reference solution in the data norm."""
        return 0.0

    def check_minimizer(self, x):
        """Warnings about a computed minimizer."""
        return []
