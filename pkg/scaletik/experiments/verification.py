"""
Batch of invariant checks over every module. Each check measures a margin
that is non-negative exactly when the invariant holds, so a report always
lists every check with how much room it had.
"""

import itertools
import math

import numpy as np

from cdislogging import get_logger

from scaletik.experiments.fitting import fit_rate
from scaletik.experiments.noise import NoiseModel, make_noisy_data
from scaletik.globals import DISCREPANCY_MAX_STEPS, DISCREPANCY_TAU, INTERPOLATION_SLACK
from scaletik.problems import ParamIdProblem, ParamIdSpec, SmoothingProblem, SmoothingSpec
from scaletik.problems.param_id import (
    jacobian_adjoint,
    jacobian_apply,
    observation_mass,
    reference_coefficient,
    solve_state,
)
from scaletik.problems.splines import SplineSpace
from scaletik.regularization import (
    TikhonovSetup,
    apriori_exponent,
    discrepancy_alpha_floor,
    discrepancy_run,
    functional_value,
    gauss_newton,
    lemma_norm_bound,
    lemma_residual_bound,
    minimize,
    noise_to_alpha_ratio,
    simple_alpha,
    simple_rule_bound,
)
from scaletik.scales import (
    StabilityParams,
    build_fourier_scale,
    build_pencil_scale,
    interpolation_ratio,
)


logger = get_logger(__name__)

SCALE_INDICES = [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0]


class Check(object):
    def __init__(self, name, margin, detail=""):
        self.name = name
        self.margin = margin
        self.detail = detail

    def __repr__(self):
        return "<Check {} {}>".format(self.name, "pass" if self.passed else "FAIL")

    @property
    def passed(self):
        return self.margin is not None and self.margin >= 0

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "detail": self.detail,
        }


class VerifyReport(object):
    def __init__(self, checks):
        self.checks = checks

    def __len__(self):
        return len(self.checks)

    def __getitem__(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failed(self):
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self):
        return {
            "passed": self.passed,
            "failed": self.failed,
            "checks": [check.as_dict() for check in self.checks],
        }


class _Context(object):
    """Shared inputs of the checks, built lazily."""

    def __init__(self, seed, adjoint):
        self.seed = seed
        self.adjoint = adjoint or jacobian_adjoint
        self._smoothing = None

    def rng(self, stream):
        return NoiseModel(self.seed, stream=(stream,)).generator()

    def smoothing_instance(self):
        """Hat reference on K = 256 with calibrated noise at delta = 1e-3."""
        if self._smoothing is None:
            problem = SmoothingProblem(SmoothingSpec(256, 1.0))
            x_true, _ = problem.reference("hat")
            delta = 1e-3
            data = make_noisy_data(
                problem.forward(x_true), delta, NoiseModel(self.seed, problem.data_norm)
            )
            M = problem.norm(x_true, 1.0)
            self._smoothing = (problem, x_true, data, delta, M)
        return self._smoothing


def check_interpolation_inequality(ctx):
    scale = build_fourier_scale(16)
    rng = ctx.rng(1)
    triples = [
        (p, q, r)
        for p, q, r in itertools.combinations_with_replacement(SCALE_INDICES, 3)
        if p < r
    ]
    worst = 0.0
    for _ in range(200):
        x = scale.element(rng.standard_normal(scale.dim))
        for p, q, r in triples:
            worst = max(worst, interpolation_ratio(x, p, q, r))
    return 1.0 + INTERPOLATION_SLACK - worst, "max ratio {:.15f} over {} triples".format(
        worst, len(triples)
    )


def check_monotone_embedding(ctx):
    rng = ctx.rng(2)
    space = SplineSpace(8, 1.0)
    scales = [
        build_fourier_scale(16),
        build_pencil_scale(space.mass_gram, space.h1_gram),
    ]
    margin = np.inf
    for scale in scales:
        for _ in range(20):
            x = scale.element(rng.standard_normal(scale.dim))
            norms = [x.norm(s) for s in SCALE_INDICES]
            for low, high in zip(norms, norms[1:]):
                margin = min(margin, high - low + 1e-12 * high)
    return margin, "both scales, {} indices".format(len(SCALE_INDICES))


def check_pencil_norms(ctx):
    rng = ctx.rng(3)
    space = SplineSpace(8, 1.0)
    M, A = space.mass_gram, space.h1_gram
    scale = build_pencil_scale(M, A)
    worst = 0.0
    for _ in range(20):
        v = rng.standard_normal(space.dim)
        x = scale.from_primal(v)
        worst = max(
            worst,
            abs(x.norm(0.0) ** 2 - v @ M @ v) / (v @ M @ v),
            abs(x.norm(1.0) ** 2 - v @ A @ v) / (v @ A @ v),
        )
    return 1e-9 - worst, "max relative deviation {:.3e}".format(worst)


def check_round_trip(ctx):
    rng = ctx.rng(4)
    space = SplineSpace(8, 1.0)
    worst = 0.0
    for scale in (
        build_fourier_scale(16),
        build_pencil_scale(space.mass_gram, space.h1_gram),
    ):
        for _ in range(10):
            coeffs = rng.standard_normal(scale.dim)
            back = scale.to_spectral(scale.from_spectral(coeffs))
            worst = max(worst, np.linalg.norm(back - coeffs) / np.linalg.norm(coeffs))
    return 1e-12 - worst, "max relative round-trip error {:.3e}".format(worst)


def check_two_sided_estimate(ctx):
    rng = ctx.rng(5)
    problem = SmoothingProblem(SmoothingSpec(64, 0.0))
    worst = 0.0
    for _ in range(20):
        f = rng.standard_normal(problem.dim)
        gap = abs(problem.data_norm(problem.forward(f)) - problem.norm(f, -1.0))
        worst = max(worst, gap / problem.norm(f, -1.0))
    return 1e-14 - worst, "||Tf||_Y vs ||f||_-1, max relative gap {:.3e}".format(worst)


def check_hoelder_stability(ctx):
    rng = ctx.rng(6)
    problem = SmoothingProblem(SmoothingSpec(64, 1.0, "hoelder_a0"))
    decay = problem.scale.powers(-2.0)
    margin = np.inf
    for _ in range(100):
        f1 = decay * rng.standard_normal(problem.dim)
        f2 = decay * rng.standard_normal(problem.dim)
        diff = f1 - f2
        bound = math.sqrt(problem.norm(f1, 1.0) + problem.norm(f2, 1.0)) * math.sqrt(
            problem.norm(diff, -1.0)
        )
        margin = min(margin, bound + 1e-10 - problem.norm(diff, 0.0))
    return margin, "100 random pairs"


def check_closed_form_optimality(ctx):
    rng = ctx.rng(7)
    problem = SmoothingProblem(SmoothingSpec(32, 1.0))
    data = rng.standard_normal(problem.dim)
    setup = TikhonovSetup(problem, 1e-2, 1.0, data, 0.0)
    x, report = minimize(setup)
    margin = np.inf
    for _ in range(50):
        direction = rng.standard_normal(problem.dim)
        direction *= 1e-3 / np.linalg.norm(direction)
        margin = min(margin, functional_value(x + direction, setup) - report.functional_value)
    return margin, "50 perturbations of size 1e-3"


def check_closed_form_vs_iterative(ctx):
    rng = ctx.rng(8)
    problem = SmoothingProblem(SmoothingSpec(32, 1.0))
    data = rng.standard_normal(problem.dim)
    setup = TikhonovSetup(problem, 1e-2, 1.0, data, 0.0)
    closed, _ = minimize(setup)
    iterative, _ = gauss_newton(setup, np.zeros(problem.dim))
    gap = np.linalg.norm(iterative - closed) / np.linalg.norm(closed)
    return 1e-12 - gap, "relative gap {:.3e}".format(gap)


def _param_id_instance(grid_n=20):
    spec = ParamIdSpec(grid_n=grid_n, s=1.0)
    coefficient, _ = reference_coefficient("parabola", spec)
    return spec, coefficient.control + 0.5


def check_adjoint_identity(ctx):
    rng = ctx.rng(9)
    spec, c = _param_id_instance()
    mass = observation_mass(spec.grid_n, spec.T)
    worst = 0.0
    for _ in range(50):
        h = rng.standard_normal(spec.grid_n + 3)
        r = rng.standard_normal(spec.grid_n + 1)
        W = jacobian_apply(c, h, spec).nodal
        lhs = W @ (mass @ r)
        rhs = h @ ctx.adjoint(c, r, spec)
        scale = math.sqrt(W @ (mass @ W)) * math.sqrt(r @ (mass @ r))
        worst = max(worst, abs(lhs - rhs) / scale)
    return 1e-10 - worst, "max relative mismatch {:.3e} over 50 pairs".format(worst)


def check_jacobian_finite_difference(ctx):
    rng = ctx.rng(10)
    spec, c = _param_id_instance()
    problem_norm = ParamIdProblem(spec).data_norm
    h = rng.standard_normal(spec.grid_n + 3)
    eps = 1e-5
    central = (
        solve_state(c + eps * h, spec).nodal - solve_state(c - eps * h, spec).nodal
    ) / (2.0 * eps)
    gap = problem_norm(central - jacobian_apply(c, h, spec).nodal)
    return 1e-6 - gap, "central difference gap {:.3e}".format(gap)


def check_state_convergence(ctx):
    steps, errors = [], []
    for grid_n in (10, 20, 40, 80, 160):
        spec = ParamIdSpec(grid_n=grid_n)
        control = SplineSpace(grid_n, spec.T).interpolate(lambda t: t, (1.0, 1.0))
        end = solve_state(control, spec).nodal[-1]
        steps.append(spec.step)
        errors.append(abs(end - spec.U0 * math.exp(-0.5 * spec.T**2)))
    slope, _ = fit_rate(steps, errors)
    return 0.1 - abs(slope - 2.0), "observed order {:.3f}".format(slope)


def check_forward_monotone(ctx):
    spec = ParamIdSpec(grid_n=50)
    coefficient, _ = reference_coefficient("hat", spec)
    U = np.abs(solve_state(coefficient, spec).nodal)
    margin = float(np.min(U[:-1] - U[1:])) + 1e-15
    return margin, "|U_(i+1)| <= |U_i| for c >= 0"


def check_noise_calibration(ctx):
    worst = 0.0
    delta = 0.1
    for problem in (
        SmoothingProblem(SmoothingSpec(8, 0.0)),
        ParamIdProblem(ParamIdSpec(grid_n=20)),
    ):
        y = problem.forward(problem.reference("hat")[0])
        noisy = make_noisy_data(y, delta, NoiseModel(ctx.seed, problem.data_norm))
        worst = max(worst, abs(problem.data_norm(noisy - y) - delta) / delta)
    return 1e-12 - worst, "max relative calibration error {:.3e}".format(worst)


def check_lemma_residual_bound(ctx):
    problem, _, data, delta, M = ctx.smoothing_instance()
    margin = np.inf
    for tau in (1.0, 7.0):
        setup = TikhonovSetup(problem, tau * delta**2 / M**2, 1.0, data, delta)
        _, report = minimize(setup)
        margin = min(margin, lemma_residual_bound(tau) * delta - report.residual_norm)
    return margin, "alpha = tau delta^2 / M^2 for tau in (1, 7)"


def check_lemma_norm_bound(ctx):
    problem, _, data, delta, M = ctx.smoothing_instance()
    margin = np.inf
    for tau in (1.0, 7.0):
        setup = TikhonovSetup(problem, tau * delta**2 / M**2, 1.0, data, delta)
        _, report = minimize(setup)
        margin = min(margin, lemma_norm_bound(tau, M) - report.penalty_norm)
    return margin, "alpha = tau delta^2 / M^2 for tau in (1, 7)"


def check_simple_rule_bounds(ctx):
    problem, _, data, delta, M = ctx.smoothing_instance()
    bound = simple_rule_bound(M)
    _, report = minimize(TikhonovSetup(problem, simple_alpha(delta), 1.0, data, delta))
    margin = min(bound * delta - report.residual_norm, bound - report.penalty_norm)
    return margin, "residual {:.3e}, penalty {:.3e}, bound {:.3e}".format(
        report.residual_norm, report.penalty_norm, bound
    )


def check_discrepancy_postconditions(ctx):
    problem, _, data, delta, M = ctx.smoothing_instance()
    outcome = discrepancy_run(problem, data, delta, 1.0)
    threshold = DISCREPANCY_TAU * delta
    margins = [
        threshold - outcome.report.residual_norm,
        outcome.alpha - discrepancy_alpha_floor(delta, M),
    ]
    if outcome.n_star > 0:
        margins.append(outcome.history[outcome.n_star - 1]["residual"] - threshold)
    sweep = None
    for n in range(DISCREPANCY_MAX_STEPS + 1):
        _, report = minimize(TikhonovSetup(problem, 2.0**-n, 1.0, data, delta))
        if report.residual_norm <= threshold:
            sweep = n
            break
    margins.append(0.0 if sweep == outcome.n_star else -1.0)
    return min(margins), "n* = {}, sweep = {}, alpha = {:.3e}".format(
        outcome.n_star, sweep, outcome.alpha
    )


def check_noise_to_alpha(ctx):
    deltas = [2.0**-j for j in range(3, 15)]
    margin = np.inf
    for a, gamma, s in itertools.product((0.0, 1.0), (0.5, 1.0), (0.0, 1.0)):
        for u in (1.5 * s + 0.5 * a, 2.0 * s + a):
            if u <= s:
                continue
            sp = StabilityParams(a, gamma, s, u)
            ratios = [noise_to_alpha_ratio(delta, sp) for delta in deltas]
            for coarse, fine in zip(ratios, ratios[1:]):
                margin = min(margin, coarse - fine)
    return margin, "delta^2 / alpha decreasing along the ladder for u > s"


def check_conditional_stability(ctx):
    rng = ctx.rng(11)
    s, rho = 1.0, 1.0
    problem = ParamIdProblem(ParamIdSpec(grid_n=20, s=s))

    def sample():
        c = rng.standard_normal(problem.dim)
        return c * rho * rng.uniform() / problem.norm(c, s)

    ratios = [problem.stability_ratio(sample(), sample(), s) for _ in range(100)]
    worst = max(ratios)
    margin = 0.0 if np.all(np.isfinite(ratios)) else -np.inf
    return margin, "max ratio {:.3e} over 100 pairs with ||c||_{} <= {}".format(worst, s, rho)


def check_apriori_exponent_monotone(ctx):
    margin = np.inf
    for a, gamma, s in itertools.product((0.0, 1.0), (0.5, 2.0 / 3.0, 1.0), (0.0, 1.0, 2.0)):
        u_values = np.linspace(max(s, 0.1), 2.0 * s + a + 0.5, 12)
        exponents = [apriori_exponent(StabilityParams(a, gamma, s, u)) for u in u_values]
        for low, high in zip(exponents, exponents[1:]):
            margin = min(margin, low - high + 1e-15)
    return margin, "exponent non-increasing in u"


CHECKS = [
    ("interpolation_inequality", check_interpolation_inequality),
    ("monotone_embedding", check_monotone_embedding),
    ("pencil_norm_consistency", check_pencil_norms),
    ("spectral_round_trip", check_round_trip),
    ("two_sided_estimate", check_two_sided_estimate),
    ("hoelder_stability", check_hoelder_stability),
    ("closed_form_optimality", check_closed_form_optimality),
    ("closed_form_vs_iterative", check_closed_form_vs_iterative),
    ("adjoint_identity", check_adjoint_identity),
    ("jacobian_finite_difference", check_jacobian_finite_difference),
    ("state_convergence_order", check_state_convergence),
    ("forward_monotonicity", check_forward_monotone),
    ("noise_calibration", check_noise_calibration),
    ("lemma_residual_bound", check_lemma_residual_bound),
    ("lemma_norm_bound", check_lemma_norm_bound),
    ("simple_rule_bounds", check_simple_rule_bounds),
    ("discrepancy_postconditions", check_discrepancy_postconditions),
    ("apriori_exponent_monotone", check_apriori_exponent_monotone),
    ("noise_to_alpha_vanishes", check_noise_to_alpha),
    ("conditional_stability", check_conditional_stability),
]


def verify_suite(adjoint=None, seed=0, only=None):
    """
    Run the invariant checks.

    Args:
        adjoint (callable): replacement for
            :func:`scaletik.problems.param_id.jacobian_adjoint`, used to
            confirm that a broken adjoint is caught
        seed (int): seed of the random test inputs
        only (list): names of the checks to run, default all

    Return:
        VerifyReport: one entry per check; failures are reported, not raised
    """
    ctx = _Context(seed, adjoint)
    checks = []
    for name, function in CHECKS:
        if only is not None and name not in only:
            continue
        try:
            margin, detail = function(ctx)
            margin = float(margin)
        except Exception as e:  # pylint: disable=broad-except
            logger.exception(e)
            margin, detail = None, "{}: {}".format(type(e).__name__, e)
        check = Check(name, margin, detail)
        logger.info("verify %s: %s (%s)", name, "pass" if check.passed else "FAIL", detail)
        checks.append(check)
    return VerifyReport(checks)
