import numpy as np
import pytest

from scaletik.errors import InsufficientDataError
from scaletik.experiments import fit_rate


DELTAS = [2.0**-j for j in range(3, 15)]


def test_linear_errors():
    slope, r_squared = fit_rate(DELTAS, [3.0 * d for d in DELTAS])
    assert slope == pytest.approx(1.0)
    assert r_squared == pytest.approx(1.0)


def test_square_root_errors():
    slope, _ = fit_rate(DELTAS, [0.2 * d**0.5 for d in DELTAS])
    assert slope == pytest.approx(0.5)


def test_noisy_errors():
    rng = np.random.default_rng(0)
    errors = [d**0.6 * (1.0 + 0.05 * rng.standard_normal()) for d in DELTAS]
    slope, r_squared = fit_rate(DELTAS, errors)
    assert abs(slope - 0.6) <= 0.03
    assert r_squared > 0.99


def test_non_positive_errors_dropped():
    errors = [d for d in DELTAS]
    errors[0] = 0.0
    errors[1] = -1.0
    slope, _ = fit_rate(DELTAS, errors)
    assert slope == pytest.approx(1.0)


def test_insufficient_data():
    with pytest.raises(InsufficientDataError):
        fit_rate([0.1, 0.01], [0.1, 0.01])
    with pytest.raises(InsufficientDataError):
        fit_rate([0.1, 0.01, 0.001], [0.1, 0.0, 0.0])
    with pytest.raises(InsufficientDataError):
        fit_rate([0.1, 0.1, 0.1], [0.1, 0.2, 0.3])
