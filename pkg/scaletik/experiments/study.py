"""
Convergence-rate studies: run a regularization rule over a geometric ladder of
noise levels, measure the reconstruction error in several norms, and fit the
empirical exponents ``kappa`` of ``error = O(delta**kappa)``.
"""

import statistics

from cdislogging import get_logger

from scaletik.errors import InsufficientDataError, ParameterError, StudyError
from scaletik.experiments.fitting import fit_rate, positive_pairs
from scaletik.experiments.noise import NoiseModel, make_noisy_data
from scaletik.globals import (
    DEFAULT_GAUSS_POINTS,
    DEFAULT_GRID,
    DEFAULT_HORIZON,
    DEFAULT_INITIAL_STATE,
    DEFAULT_REPETITIONS,
    DEFAULT_TRUNCATION,
    DEFAULT_WORKERS,
    DISCREPANCY_MAX_STEPS,
    DISCREPANCY_TAU,
    FLAG_UNCOVERED,
    MAX_FAILURE_FRACTION,
    MIN_LADDER_STEPS,
    PARAM_ID_LADDER,
    PARAM_ID_REFERENCE_U,
    PROBLEMS,
    RESOLUTION_FACTOR,
    RULES,
    SCHEMA_VERSION,
    SMOOTHING_LADDER,
    SMOOTHING_REFERENCE_U,
    STABILITY_VARIANTS,
    TABLE_GRIDS,
)
from scaletik.problems import ParamIdProblem, ParamIdSpec, SmoothingProblem, SmoothingSpec
from scaletik.regularization import (
    TikhonovSetup,
    apriori_alpha,
    apriori_exponent,
    discrepancy_run,
    minimize,
    simple_alpha,
    theoretical_rate,
)
from scaletik.scales import StabilityParams
from scaletik.utils.parse import parse_json
from scaletik.utils.scheduling import run_keyed


logger = get_logger(__name__)


REFERENCE_U = {"smoothing": SMOOTHING_REFERENCE_U, "param-id": PARAM_ID_REFERENCE_U}
DEFAULT_LADDERS = {"smoothing": SMOOTHING_LADDER, "param-id": PARAM_ID_LADDER}


def kind_for(problem, u):
    """Name of the reference solution of ``problem`` whose smoothness is ``u``."""
    for kind, u_max in REFERENCE_U[problem].items():
        if u_max == u:
            return kind
    raise ParameterError(
        "no {} reference solution has u = {}; available: {}".format(
            problem, u, sorted(REFERENCE_U[problem].values())
        )
    )


class RateStudyConfig(object):
    """
    Description of one rate study.

    Args:
        problem (str): ``smoothing`` or ``param-id``
        s (float): penalty index
        rule (str): ``simple``, ``apriori`` or ``discrepancy``
        u (float): smoothness of the reference solution; selects ``kind``
            when that is not given
        kind (str): reference solution name
        ladder (tuple): ``(j0, j1)``, noise levels ``delta0 * 2**-j``
        norms (list): indices ``r`` of the reported error norms
        repetitions (int): noise realizations per ladder point
        seed (int): noise seed
        workers (int): worker threads
        variant (str): smoothing stability variant
        K (int): smoothing truncation
        grid_n, T, U0, gauss_points: parameter identification discretization
        tau (float): discrepancy constant
        max_steps (int): discrepancy ladder cap
    """

    def __init__(
        self,
        problem,
        s,
        rule,
        u=None,
        kind=None,
        ladder=None,
        delta0=1.0,
        norms=(0.0,),
        repetitions=DEFAULT_REPETITIONS,
        seed=0,
        workers=DEFAULT_WORKERS,
        variant="lipschitz_a1",
        K=DEFAULT_TRUNCATION,
        grid_n=DEFAULT_GRID,
        T=DEFAULT_HORIZON,
        U0=DEFAULT_INITIAL_STATE,
        gauss_points=DEFAULT_GAUSS_POINTS,
        tau=DISCREPANCY_TAU,
        max_steps=DISCREPANCY_MAX_STEPS,
    ):
        if problem not in PROBLEMS:
            raise ParameterError(
                "unknown problem {}; expected one of {}".format(problem, PROBLEMS)
            )
        if rule not in RULES:
            raise ParameterError("unknown rule {}; expected one of {}".format(rule, RULES))
        if variant not in STABILITY_VARIANTS:
            raise ParameterError(
                "unknown stability variant {}; expected one of {}".format(
                    variant, sorted(STABILITY_VARIANTS)
                )
            )
        if kind is None:
            if u is None:
                raise ParameterError("either u or kind must be given")
            kind = kind_for(problem, float(u))
        if kind not in REFERENCE_U[problem]:
            raise ParameterError(
                "unknown {} reference solution {}; expected one of {}".format(
                    problem, kind, sorted(REFERENCE_U[problem])
                )
            )
        ladder = tuple(ladder or DEFAULT_LADDERS[problem])
        if len(ladder) != 2 or ladder[1] - ladder[0] < MIN_LADDER_STEPS:
            raise ParameterError(
                "the noise ladder j0..j1 needs j1 - j0 >= {}, got {}".format(
                    MIN_LADDER_STEPS, ladder
                )
            )
        if repetitions < 1:
            raise ParameterError("repetitions must be >= 1, got {}".format(repetitions))
        if not norms:
            raise ParameterError("at least one report norm is required")
        if not float(tau) > 0:
            raise ParameterError("tau must be positive, got {}".format(tau))
        if int(max_steps) < 0:
            raise ParameterError("max_steps must be >= 0, got {}".format(max_steps))
        self.problem = problem
        self.s = float(s)
        self.rule = rule
        self.kind = kind
        self.u = REFERENCE_U[problem][kind]
        self.ladder = (int(ladder[0]), int(ladder[1]))
        self.delta0 = float(delta0)
        self.norms = sorted(float(r) for r in norms)
        self.repetitions = int(repetitions)
        self.seed = int(seed)
        self.workers = int(workers)
        self.variant = variant
        self.K = int(K)
        self.grid_n = int(grid_n)
        self.T = float(T)
        self.U0 = float(U0)
        self.gauss_points = int(gauss_points)
        self.tau = float(tau)
        self.max_steps = int(max_steps)

    def __repr__(self):
        return "<RateStudyConfig {} {} s={} u={} rule={}>".format(
            self.problem, self.kind, self.s, self.u, self.rule
        )

    @property
    def deltas(self):
        return [self.delta0 * 2.0**-j for j in range(self.ladder[0], self.ladder[1] + 1)]

    def stability(self, r=0.0):
        if self.problem == "smoothing":
            return StabilityParams.for_smoothing(self.variant, self.s, self.u, r)
        return StabilityParams.for_param_id(self.s, self.u, r)

    def build_problem(self):
        if self.problem == "smoothing":
            return SmoothingProblem(SmoothingSpec(self.K, self.s, self.variant))
        return ParamIdProblem(
            ParamIdSpec(self.T, self.U0, self.grid_n, self.s, self.gauss_points)
        )

    def as_dict(self):
        """Echo of the settings that determine the result."""
        echo = {
            "problem": self.problem,
            "kind": self.kind,
            "s": self.s,
            "u": self.u,
            "rule": self.rule,
            "ladder": list(self.ladder),
            "delta0": self.delta0,
            "norms": list(self.norms),
            "repetitions": self.repetitions,
            "seed": self.seed,
            "tau": self.tau,
            "max_steps": self.max_steps,
        }
        if self.problem == "smoothing":
            echo.update({"variant": self.variant, "K": self.K})
        else:
            echo.update(
                {
                    "grid_n": self.grid_n,
                    "T": self.T,
                    "U0": self.U0,
                    "gauss_points": self.gauss_points,
                }
            )
        return echo


class RateStudyResult(object):
    """
    Aggregated outcome of a study.

    Attributes:
        config (dict): echo of the :class:`RateStudyConfig`
        a, gamma (float): stability parameters used for predictions
        deltas (list): noise levels of the ladder points that produced data
        alphas (list): median chosen alpha per ladder point
        errors (dict): ``r -> list`` of median errors per ladder point
        fits (list): per norm ``r``: ``kappa_hat``, ``r_squared``, ``points``,
            ``theoretical_rate``, ``flag`` and ``violations``
        alpha_exponent (float): computed for a-priori rules, fitted for the
            discrepancy rule
        cells (list): every (ladder index, repetition) cell with its raw data
        failures (list): cells whose minimization failed
    """

    def __init__(
        self,
        config,
        a,
        gamma,
        deltas,
        alphas,
        errors,
        fits,
        alpha_exponent,
        alpha_exponent_fitted,
        cells,
        failures,
    ):
        self.config = config
        self.a = a
        self.gamma = gamma
        self.deltas = deltas
        self.alphas = alphas
        self.errors = errors
        self.fits = fits
        self.alpha_exponent = alpha_exponent
        self.alpha_exponent_fitted = alpha_exponent_fitted
        self.cells = cells
        self.failures = failures

    def __repr__(self):
        return "<RateStudyResult {} {} s={} rule={}>".format(
            self.config["problem"], self.config["kind"], self.s, self.rule
        )

    @property
    def s(self):
        return self.config["s"]

    @property
    def u(self):
        return self.config["u"]

    @property
    def rule(self):
        return self.config["rule"]

    def fit(self, r):
        for fit in self.fits:
            if fit["r"] == r:
                return fit
        raise KeyError(r)

    def kappa(self, r):
        return self.fit(r)["kappa_hat"]

    def to_rows(self):
        """One flat row per report norm, in the column order of the CSV output."""
        return [
            {
                "s": self.s,
                "u": self.u,
                "rule": self.rule,
                "r": fit["r"],
                "kappa_hat": fit["kappa_hat"],
                "r_squared": fit["r_squared"],
                "alpha_exponent": self.alpha_exponent,
                "flag": fit["flag"],
            }
            for fit in self.fits
        ]

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "a": self.a,
            "gamma": self.gamma,
            "deltas": self.deltas,
            "alphas": self.alphas,
            "errors": [
                {"r": r, "values": values} for r, values in sorted(self.errors.items())
            ],
            "fits": self.fits,
            "alpha_exponent": self.alpha_exponent,
            "alpha_exponent_fitted": self.alpha_exponent_fitted,
            "cells": self.cells,
            "failures": self.failures,
        }

    @classmethod
    def from_dict(cls, document):
        if document.get("schema_version") != SCHEMA_VERSION:
            raise ParameterError(
                "unsupported results schema {}; expected {}".format(
                    document.get("schema_version"), SCHEMA_VERSION
                )
            )
        try:
            return cls(
                config=document["config"],
                a=document["a"],
                gamma=document["gamma"],
                deltas=document["deltas"],
                alphas=document["alphas"],
                errors={item["r"]: item["values"] for item in document["errors"]},
                fits=document["fits"],
                alpha_exponent=document["alpha_exponent"],
                alpha_exponent_fitted=document["alpha_exponent_fitted"],
                cells=document.get("cells", []),
                failures=document.get("failures", []),
            )
        except (KeyError, TypeError) as e:
            raise ParameterError("malformed results document: missing {}".format(e))


def _choose_and_minimize(config, problem, data, delta, sp):
    """Run one rule at one noise level; return ``(x, report, cell_extras)``."""
    if config.rule == "discrepancy":
        outcome = discrepancy_run(
            problem, data, delta, config.s, config.tau, config.max_steps
        )
        return outcome.x, outcome.report, {"n_star": outcome.n_star}
    if config.rule == "simple":
        alpha = simple_alpha(delta)
    else:
        alpha = apriori_alpha(delta, sp)
    x, report = minimize(TikhonovSetup(problem, alpha, config.s, data, delta))
    return x, report, {}


def check_resolution(problem, kind, deltas):
    """
    The discretization error of the reference solution must sit a decade
    below the smallest noise level.
    """
    error = problem.resolution_error(kind)
    limit = min(deltas) / RESOLUTION_FACTOR
    if error > limit:
        raise ParameterError(
            "discretization error {:.3e} of {} exceeds {:.3e}; increase the "
            "truncation or shorten the noise ladder".format(error, kind, limit)
        )
    return error


def run_study(config):
    """
    Run every (ladder point, repetition) cell, aggregate errors and chosen
    parameters by their median over repetitions, and fit the exponents.

    Raises:
        StudyError: if more than 20 % of the cells fail
    """
    problem = config.build_problem()
    x_true, _ = problem.reference(config.kind)
    y_true = problem.forward(x_true)
    sp = config.stability()
    deltas = config.deltas
    check_resolution(problem, config.kind, deltas)
    noise = NoiseModel(config.seed, problem.data_norm)
    logger.info(
        "study %s: %d ladder points x %d repetitions", config, len(deltas), config.repetitions
    )

    def cell(key):
        j, rep = key
        delta = deltas[j]
        data = make_noisy_data(y_true, delta, noise.for_stream(config.ladder[0] + j, rep))
        x, report, extras = _choose_and_minimize(config, problem, data, delta, sp)
        record = {
            "j": config.ladder[0] + j,
            "repetition": rep,
            "delta": delta,
            "alpha": report.alpha,
            "residual": report.residual_norm,
            "penalty_norm": report.penalty_norm,
            "iterations": report.iterations,
            "errors": [
                {"r": r, "value": problem.norm(x - x_true, r)} for r in config.norms
            ],
            "warnings": report.warnings,
        }
        record.update(extras)
        return record

    keys = [(j, rep) for j in range(len(deltas)) for rep in range(config.repetitions)]
    results, errors = run_keyed(cell, keys, config.workers)
    failures = [
        {
            "j": config.ladder[0] + key[0],
            "repetition": key[1],
            "error": "{}: {}".format(type(errors[key]).__name__, errors[key]),
        }
        for key in sorted(errors)
    ]
    if len(errors) > MAX_FAILURE_FRACTION * len(keys):
        raise StudyError(len(errors), len(keys))

    used_deltas, alphas = [], []
    medians = {r: [] for r in config.norms}
    for j, delta in enumerate(deltas):
        records = [results[(j, rep)] for rep in range(config.repetitions) if (j, rep) in results]
        if not records:
            continue
        used_deltas.append(delta)
        alphas.append(statistics.median(record["alpha"] for record in records))
        for index, r in enumerate(config.norms):
            medians[r].append(
                statistics.median(record["errors"][index]["value"] for record in records)
            )

    fits = []
    for r in config.norms:
        norm_sp = sp.with_norm(r)
        violations = norm_sp.rate_violations()
        try:
            kappa_hat, r_squared = fit_rate(used_deltas, medians[r])
        except InsufficientDataError as e:
            logger.warning("no rate for r=%s: %s", r, e)
            kappa_hat, r_squared = None, None
        fits.append(
            {
                "r": r,
                "kappa_hat": kappa_hat,
                "r_squared": r_squared,
                "points": int(positive_pairs(used_deltas, medians[r])[0].size),
                "theoretical_rate": theoretical_rate(norm_sp),
                "flag": FLAG_UNCOVERED if violations else "",
                "violations": violations,
            }
        )

    if config.rule == "discrepancy":
        alpha_exponent, _ = fit_rate(used_deltas, alphas)
        fitted = True
    else:
        alpha_exponent = 2.0 if config.rule == "simple" else apriori_exponent(sp)
        fitted = False

    logger.info(
        "study %s finished: %s",
        config,
        ", ".join(
            "kappa(r={})={}".format(fit["r"], fit["kappa_hat"]) for fit in fits
        ),
    )
    return RateStudyResult(
        config=config.as_dict(),
        a=sp.a,
        gamma=sp.gamma,
        deltas=used_deltas,
        alphas=alphas,
        errors=medians,
        fits=fits,
        alpha_exponent=alpha_exponent,
        alpha_exponent_fitted=fitted,
        cells=[results[key] for key in sorted(results)],
        failures=failures,
    )


def run_table(problem, rule, variant="lipschitz_a1", norms=None, **settings):
    """
    Run the full ``(s, u)`` grid of one table.

    Return:
        list: :class:`RateStudyResult` ordered by ``s`` then ``u``
    """
    if problem not in TABLE_GRIDS:
        raise ParameterError(
            "unknown problem {}; expected one of {}".format(problem, PROBLEMS)
        )
    grid = TABLE_GRIDS[problem]
    s_values = grid["s"]
    if problem == "smoothing" and variant == "hoelder_a0":
        s_values = [s for s in s_values if s >= 1]
    norms = norms if norms is not None else grid["norms"]
    results = []
    for s in s_values:
        for u in grid["u"]:
            config = RateStudyConfig(
                problem, s, rule, u=u, norms=norms, variant=variant, **settings
            )
            results.append(run_study(config))
    return results


def load_results(path):
    """Read results written by the json table format."""
    try:
        with open(path, "r") as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise ParameterError("cannot read results {}: {}".format(path, e))
    document = parse_json(text)
    if isinstance(document, dict) and "results" in document:
        document = document["results"]
    if not isinstance(document, list):
        document = [document]
    return [RateStudyResult.from_dict(item) for item in document]
