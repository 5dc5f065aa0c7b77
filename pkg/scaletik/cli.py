"""
Command-line entry point::

    scaletik [--config FILE] [--seed N] [--out DIR] SUBCOMMAND [options]

Subcommands ``smoothing`` and ``param-id`` run one rate study, ``tables``
runs (or re-renders) a whole table grid and ``verify`` runs the invariant
checks. Every run writes its result files, a ``config.toml`` echo and a
``manifest.json`` to the output directory.
"""

import argparse
import os
import platform
import sys

import numpy as np
import scipy

from cdislogging import get_logger

from scaletik.config import (
    apply_overrides,
    configure_logging,
    dump_config,
    load_config,
    set_value,
)
from scaletik.errors import APIError, ConfigError, ParameterError, UserError
from scaletik.experiments import (
    RateStudyConfig,
    load_results,
    run_study,
    run_table,
    verify_suite,
)
from scaletik.globals import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_STUDY_FAILURE,
    PROBLEMS,
    RULES,
    STABILITY_VARIANTS,
    SUPPORTED_FORMATS,
)
from scaletik.utils.parse import parse_ladder, parse_norms
from scaletik.utils.transforms import emit_tables, json_dumps_formatted
from scaletik.utils.transforms.tables import EXTENSIONS
from scaletik.version_data import COMMIT, VERSION


logger = get_logger(__name__)

#: argparse destination -> top-level configuration key
COMMON_KEYS = {"seed": "seed", "out": "output_dir", "workers": "workers"}

STUDY_KEYS = [
    "rule",
    "s",
    "u",
    "kind",
    "norms",
    "deltas",
    "delta0",
    "reps",
    "tau",
    "max_steps",
]
PROBLEM_KEYS = {
    "smoothing": ["variant", "K"],
    "param-id": ["grid_n", "T", "U0", "gauss_points"],
}
TABLES_KEYS = {
    "problem": "problem",
    "rule": "rule",
    "variant": "variant",
    "formats": "formats",
    "source": "from",
}
VERIFY_KEYS = {"checks": "checks"}


def _common_parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="TOML configuration file")
    common.add_argument("--seed", type=int, help="noise seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("--workers", type=int, help="worker threads, 1 runs serially")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        metavar="KEY=VALUE",
        help="override a configuration value, e.g. smoothing.K=4096",
    )
    common.add_argument(
        "--print-config",
        action="store_true",
        help="print the effective configuration and exit",
    )
    return common


def _add_study_arguments(parser, problem):
    parser.add_argument("--rule", choices=RULES, help="parameter choice rule")
    parser.add_argument("--s", type=float, help="penalty index")
    parser.add_argument("--u", type=float, help="smoothness of the reference solution")
    parser.add_argument("--kind", help="reference solution, overrides --u")
    parser.add_argument("--norms", type=parse_norms, help="report norms, e.g. 0,1")
    parser.add_argument("--deltas", type=parse_ladder, help="noise ladder j0..j1")
    parser.add_argument("--delta0", type=float, help="largest noise level")
    parser.add_argument("--reps", type=int, help="repetitions per noise level")
    parser.add_argument("--tau", type=float, help="discrepancy constant")
    parser.add_argument("--max-steps", dest="max_steps", type=int)
    if problem == "smoothing":
        parser.add_argument("--variant", choices=sorted(STABILITY_VARIANTS))
        parser.add_argument("--K", type=int, help="Fourier truncation")
    else:
        parser.add_argument("--grid-n", dest="grid_n", type=int, help="grid intervals")
        parser.add_argument("--T", type=float, help="time horizon")
        parser.add_argument("--U0", type=float, help="initial state")
        parser.add_argument("--gauss-points", dest="gauss_points", type=int)


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="scaletik",
        description="Tikhonov regularization in Hilbert scales: rate studies",
        parents=[common],
        argument_default=argparse.SUPPRESS,
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + VERSION)
    subparsers = parser.add_subparsers(dest="subcommand")

    for problem in PROBLEMS:
        study = subparsers.add_parser(
            problem,
            parents=[common],
            argument_default=argparse.SUPPRESS,
            help="run one {} rate study".format(problem),
        )
        _add_study_arguments(study, problem)

    tables = subparsers.add_parser(
        "tables",
        parents=[common],
        argument_default=argparse.SUPPRESS,
        help="run a whole table grid or re-render saved results",
    )
    tables.add_argument("--problem", choices=PROBLEMS)
    tables.add_argument("--rule", choices=RULES)
    tables.add_argument("--variant", choices=sorted(STABILITY_VARIANTS))
    tables.add_argument(
        "--format", dest="formats", action="append", choices=SUPPORTED_FORMATS
    )
    tables.add_argument("--from", dest="source", help="results JSON to re-render")

    verify = subparsers.add_parser(
        "verify",
        parents=[common],
        argument_default=argparse.SUPPRESS,
        help="run the invariant checks",
    )
    verify.add_argument("--check", dest="checks", action="append", help="run only this check")
    return parser


def effective_config(options):
    """Defaults, then the ``--config`` file, then flags, then ``--set`` items."""
    config = load_config(getattr(options, "config", None))
    for dest, key in COMMON_KEYS.items():
        if hasattr(options, dest):
            set_value(config, [key], getattr(options, dest), source="flag")

    subcommand = getattr(options, "subcommand", None)
    if subcommand in PROBLEMS:
        for key in STUDY_KEYS + PROBLEM_KEYS[subcommand]:
            if hasattr(options, key):
                set_value(config, [subcommand, key], getattr(options, key), source="flag")
        if hasattr(options, "u") and not hasattr(options, "kind"):
            config[subcommand]["kind"] = ""
    elif subcommand == "tables":
        for dest, key in TABLES_KEYS.items():
            if hasattr(options, dest):
                set_value(config, ["tables", key], getattr(options, dest), source="flag")
    elif subcommand == "verify":
        for dest, key in VERIFY_KEYS.items():
            if hasattr(options, dest):
                set_value(config, ["verify", key], getattr(options, dest), source="flag")

    return apply_overrides(config, getattr(options, "overrides", None))


def study_settings(config, problem):
    """Keyword arguments of :class:`RateStudyConfig` shared by studies and tables."""
    table = config[problem]
    settings = {
        "ladder": table["deltas"],
        "delta0": table["delta0"],
        "repetitions": table["reps"],
        "seed": config["seed"],
        "workers": config["workers"],
        "tau": table["tau"],
        "max_steps": table["max_steps"],
    }
    settings.update({key: table[key] for key in PROBLEM_KEYS[problem]})
    return settings


def study_config(config, problem):
    table = config[problem]
    return RateStudyConfig(
        problem,
        table["s"],
        table["rule"],
        u=table["u"],
        kind=table["kind"] or None,
        norms=table["norms"],
        **study_settings(config, problem)
    )


def _write(directory, name, text):
    path = os.path.join(directory, name)
    with open(path, "w", newline="") as f:
        f.write(text)
    logger.info("wrote %s", path)
    return name


def write_results(directory, subcommand, results, formats=None):
    """Write ``<subcommand>_results.<ext>`` for every requested format."""
    stem = "{}_results".format(subcommand.replace("-", "_"))
    return [
        _write(directory, "{}.{}".format(stem, EXTENSIONS[file_format]), emit_tables(results, file_format))
        for file_format in formats or SUPPORTED_FORMATS
    ]


def manifest(subcommand, config, outputs):
    return {
        "subcommand": subcommand,
        "seed": config["seed"],
        "config": config,
        "outputs": outputs,
        "versions": {
            "scaletik": VERSION,
            "commit": COMMIT,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }


def run_subcommand(subcommand, config):
    """
    Run ``subcommand`` with the effective ``config`` and write its outputs.

    Return:
        int: exit code
    """
    directory = config["output_dir"]
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise ConfigError("cannot create output directory {}: {}".format(directory, e))
    code = EXIT_OK

    if subcommand in PROBLEMS:
        result = run_study(study_config(config, subcommand))
        outputs = write_results(directory, subcommand, [result])
        print(emit_tables([result], "markdown"))
    elif subcommand == "tables":
        table = config["tables"]
        if table["from"]:
            results = load_results(table["from"])
        else:
            problem = table["problem"]
            settings = study_settings(config, problem)
            settings.pop("variant", None)
            results = run_table(
                problem,
                table["rule"],
                table["variant"],
                norms=config[problem]["norms"],
                **settings
            )
        outputs = write_results(directory, "tables", results, table["formats"])
        if "markdown" in table["formats"]:
            print(emit_tables(results, "markdown"))
    else:
        report = verify_suite(seed=config["seed"], only=config["verify"]["checks"] or None)
        outputs = [_write(directory, "verify_report.json", json_dumps_formatted(report.to_dict()))]
        for check in report.checks:
            print("{:<28} {}".format(check.name, "pass" if check.passed else "FAIL"))
        if not report.passed:
            logger.error("verification failed: %s", ", ".join(report.failed))
            code = EXIT_STUDY_FAILURE

    outputs.append(_write(directory, "config.toml", dump_config(config)))
    _write(directory, "manifest.json", json_dumps_formatted(manifest(subcommand, config, outputs)))
    return code


def _fail(error, code):
    message = getattr(error, "message", None) or str(error)
    logger.error("%s: %s", type(error).__name__, message)
    sys.stderr.write("error: {}\n".format(message))
    return code


def main(args=None):
    """
    Parse ``args`` and run. Return the exit code: 0 on success, 1 on
    numerical or study-level failures, 2 on configuration and argument
    errors.
    """
    configure_logging()
    parser = build_parser()
    try:
        options = parser.parse_args(args)
        config = effective_config(options)
        subcommand = getattr(options, "subcommand", None)
        if getattr(options, "print_config", False):
            sys.stdout.write(dump_config(config))
            return EXIT_OK
        if subcommand is None:
            parser.print_usage(sys.stderr)
            raise ParameterError("a subcommand is required: {}".format(
                ", ".join(PROBLEMS + ["tables", "verify"])
            ))
        logger.info("configuration for %s: %s", subcommand, json_dumps_formatted(config))
        return run_subcommand(subcommand, config)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG_ERROR
    except UserError as e:
        return _fail(e, EXIT_CONFIG_ERROR)
    except APIError as e:
        return _fail(e, EXIT_STUDY_FAILURE)


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
