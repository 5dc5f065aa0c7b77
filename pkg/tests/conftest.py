import numpy as np
import pytest

from scaletik.problems import ParamIdProblem, ParamIdSpec, SmoothingProblem, SmoothingSpec
from scaletik.problems.param_id import reference_coefficient
from scaletik.problems.splines import SplineSpace
from scaletik.scales import build_fourier_scale, build_pencil_scale


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def fourier_scale():
    return build_fourier_scale(16)


@pytest.fixture(scope="session")
def spline_space():
    """Cubic splines on [0, 1] with 8 intervals."""
    return SplineSpace(8, 1.0)


@pytest.fixture(scope="session")
def pencil_scale(spline_space):
    return build_pencil_scale(spline_space.mass_gram, spline_space.h1_gram)


@pytest.fixture(scope="session")
def smoothing_problem():
    return SmoothingProblem(SmoothingSpec(64, 1.0))


@pytest.fixture(scope="session")
def param_id_spec():
    return ParamIdSpec(grid_n=20, s=1.0)


@pytest.fixture(scope="session")
def param_id_problem(param_id_spec):
    return ParamIdProblem(param_id_spec)


@pytest.fixture(scope="session")
def smooth_coefficient(param_id_spec):
    """Strictly positive smooth coefficient: the parabola shifted by 1/2."""
    coefficient, _ = reference_coefficient("parabola", param_id_spec)
    return coefficient.control + 0.5
