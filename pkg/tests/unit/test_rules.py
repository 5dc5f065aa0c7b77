import math

import numpy as np
import pytest

from scaletik.errors import DegenerateExponentError, NoStopError, ParameterError
from scaletik.experiments import NoiseModel, make_noisy_data
from scaletik.problems import SmoothingProblem, SmoothingSpec
from scaletik.regularization import (
    DiscrepancyResult,
    TikhonovSetup,
    apriori_alpha,
    apriori_exponent,
    discrepancy_alpha_floor,
    discrepancy_run,
    lemma_norm_bound,
    lemma_residual_bound,
    minimize,
    noise_to_alpha_ratio,
    simple_alpha,
    simple_rule_bound,
    theoretical_rate,
)
from scaletik.scales import StabilityParams


#: (s, u) -> exponent of the a-priori rule for a = gamma = 1
APRIORI_EXPONENTS = {
    (0.0, 0.5): 4.0 / 3.0,
    (0.0, 1.0): 1.0,
    (0.0, 1.5): 0.8,
    (1.0, 0.5): 8.0 / 3.0,
    (1.0, 1.0): 2.0,
    (1.0, 1.5): 1.6,
}


@pytest.fixture(scope="module")
def hat_instance():
    problem = SmoothingProblem(SmoothingSpec(256, 1.0))
    x_true, _ = problem.reference("hat")
    delta = 1e-3
    data = make_noisy_data(problem.forward(x_true), delta, NoiseModel(3, problem.data_norm))
    return problem, x_true, data, delta, problem.norm(x_true, 1.0)


def test_simple_alpha():
    assert simple_alpha(0.1) == pytest.approx(0.01)
    assert simple_alpha(1.0) == 1.0
    assert simple_alpha(2.0**-10) == 2.0**-20
    with pytest.raises(ParameterError):
        simple_alpha(0.0)


@pytest.mark.parametrize("s, u", sorted(APRIORI_EXPONENTS))
def test_apriori_exponent(s, u):
    sp = StabilityParams(1.0, 1.0, s, u)
    assert apriori_exponent(sp) == pytest.approx(APRIORI_EXPONENTS[(s, u)])
    assert apriori_alpha(0.01, sp) == pytest.approx(0.01 ** APRIORI_EXPONENTS[(s, u)])


def test_apriori_degenerate_exponent():
    with pytest.raises(DegenerateExponentError):
        apriori_alpha(0.1, StabilityParams(0.0, 1.0, 0.0, 0.0))


def test_apriori_outside_range_still_computed():
    sp = StabilityParams(1.0, 1.0, 0.0, 2.0)
    assert sp.theory_violations() == ["u <= 2s + a"]
    assert apriori_alpha(0.1, sp) == pytest.approx(0.1 ** (2.0 - 4.0 / 3.0))


def test_theoretical_rate():
    assert theoretical_rate(StabilityParams(1.0, 1.0, 0.0, 0.5)) == pytest.approx(1.0 / 3.0)
    assert theoretical_rate(StabilityParams(0.0, 0.5, 1.0, 1.5, r=1.0)) == pytest.approx(1.0 / 6.0)


def test_noise_to_alpha_ratio():
    equal = StabilityParams(1.0, 1.0, 1.0, 1.0)
    assert noise_to_alpha_ratio(1e-2, equal) == pytest.approx(1.0)
    assert noise_to_alpha_ratio(1e-5, equal) == pytest.approx(1.0)
    smoother = StabilityParams(1.0, 1.0, 0.0, 1.0)
    assert noise_to_alpha_ratio(1e-5, smoother) < noise_to_alpha_ratio(1e-2, smoother) < 1.0


def test_named_bounds():
    assert lemma_residual_bound(4.0) == pytest.approx(math.sqrt(6.0))
    assert lemma_norm_bound(4.0, 2.0) == pytest.approx(2.0 * math.sqrt(1.5))
    assert discrepancy_alpha_floor(0.1, 1.0) == pytest.approx(0.07)
    assert simple_rule_bound(1.0) == pytest.approx(math.sqrt(3.0))


def test_simple_rule_bounds_hold(hat_instance):
    problem, x_true, _, _, M = hat_instance
    y = problem.forward(x_true)
    bound = simple_rule_bound(M)
    for j in range(3, 12):
        delta = 2.0**-j
        data = make_noisy_data(y, delta, NoiseModel(11, problem.data_norm, (j,)))
        _, report = minimize(TikhonovSetup(problem, simple_alpha(delta), 1.0, data, delta))
        assert report.residual_norm <= bound * delta
        assert report.penalty_norm <= bound


def test_lemma_bounds_hold(hat_instance):
    problem, _, data, delta, M = hat_instance
    for tau in (1.0, 4.0, 7.0):
        _, report = minimize(TikhonovSetup(problem, tau * delta**2 / M**2, 1.0, data, delta))
        assert report.residual_norm <= lemma_residual_bound(tau) * delta
        assert report.penalty_norm <= lemma_norm_bound(tau, M)


def test_discrepancy_postconditions(hat_instance):
    problem, _, data, delta, M = hat_instance
    outcome = discrepancy_run(problem, data, delta, 1.0)
    assert isinstance(outcome, DiscrepancyResult)
    assert outcome.alpha == 2.0**-outcome.n_star
    assert outcome.report.residual_norm <= 4.0 * delta
    assert outcome.n_star > 0
    assert outcome.history[outcome.n_star - 1]["residual"] > 4.0 * delta
    assert outcome.alpha >= discrepancy_alpha_floor(delta, M)
    assert len(outcome.history) == outcome.n_star + 1

    n_star, alpha, x, history = outcome
    assert np.array_equal(x, outcome.x)
    assert [entry["n"] for entry in history] == list(range(n_star + 1))


def test_discrepancy_matches_sweep(hat_instance):
    problem, _, data, delta, _ = hat_instance
    outcome = discrepancy_run(problem, data, delta, 1.0)
    for n in range(outcome.n_star + 1):
        _, report = minimize(TikhonovSetup(problem, 2.0**-n, 1.0, data, delta))
        assert (report.residual_norm <= 4.0 * delta) == (n == outcome.n_star)


def test_discrepancy_without_stop(hat_instance):
    problem, _, data, delta, _ = hat_instance
    with pytest.raises(NoStopError):
        discrepancy_run(problem, data, delta, 1.0, tau=1e-6, max_steps=3)


@pytest.mark.parametrize("kwargs", [{"tau": 0.0}, {"tau": -4.0}, {"max_steps": -1}])
def test_discrepancy_invalid_settings(hat_instance, kwargs):
    problem, _, data, delta, _ = hat_instance
    with pytest.raises(ParameterError):
        discrepancy_run(problem, data, delta, 1.0, **kwargs)
