"""
Run configuration.

Defaults live in :data:`DEFAULT_CONFIG`; a TOML file is merged over them,
then command-line flags, then ``--set key=value`` overrides. Every table is
flat and unknown keys are rejected.
"""

import copy
import logging
import os

from cdislogging import get_logger

from scaletik.errors import ConfigError
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
    PARAM_ID_LADDER,
    SMOOTHING_LADDER,
    SUPPORTED_FORMATS,
)
from scaletik.utils.parse import parse_override
from scaletik.utils.toml import toml_dumps, toml_loads


logger = get_logger(__name__)

#: Environment switch for debug logging.
DEBUG_ENV = "SCALETIK_DEBUG"

DEFAULT_CONFIG = {
    "seed": 0,
    "output_dir": "results",
    "workers": DEFAULT_WORKERS,
    "smoothing": {
        "rule": "apriori",
        "s": 0.0,
        "u": 0.5,
        "kind": "",
        "variant": "lipschitz_a1",
        "norms": [0.0, 1.0],
        "deltas": list(SMOOTHING_LADDER),
        "delta0": 1.0,
        "reps": DEFAULT_REPETITIONS,
        "K": DEFAULT_TRUNCATION,
        "tau": DISCREPANCY_TAU,
        "max_steps": DISCREPANCY_MAX_STEPS,
    },
    "param-id": {
        "rule": "discrepancy",
        "s": 1.0,
        "u": 1.5,
        "kind": "",
        "norms": [0.0, 1.0],
        "deltas": list(PARAM_ID_LADDER),
        "delta0": 1.0,
        "reps": DEFAULT_REPETITIONS,
        "grid_n": DEFAULT_GRID,
        "T": DEFAULT_HORIZON,
        "U0": DEFAULT_INITIAL_STATE,
        "gauss_points": DEFAULT_GAUSS_POINTS,
        "tau": DISCREPANCY_TAU,
        "max_steps": DISCREPANCY_MAX_STEPS,
    },
    "tables": {
        "problem": "smoothing",
        "rule": "apriori",
        "variant": "lipschitz_a1",
        "formats": list(SUPPORTED_FORMATS),
        "from": "",
    },
    "verify": {
        "checks": [],
    },
}


def configure_logging(debug=None):
    """
    Set the level of every ``scaletik`` logger: debug when ``SCALETIK_DEBUG``
    is ``"True"`` (or ``debug`` is true), info otherwise.
    """
    if debug is None:
        debug = os.environ.get(DEBUG_ENV) == "True"
    level = logging.DEBUG if debug else logging.INFO
    get_logger("scaletik", log_level="debug" if debug else "info")
    for name in list(logging.Logger.manager.loggerDict):
        if name == "scaletik" or name.startswith("scaletik."):
            logging.getLogger(name).setLevel(level)
    return level


def _compatible(default, value):
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, float):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if isinstance(default, int):
        return isinstance(value, int) and not isinstance(value, bool)
    if isinstance(default, list):
        return isinstance(value, list) and (
            not default or all(_compatible(default[0], v) for v in value)
        )
    return isinstance(value, type(default))


def _coerce(default, value):
    if isinstance(default, float):
        return float(value)
    if isinstance(default, list) and default and isinstance(default[0], float):
        return [float(v) for v in value]
    return value


def set_value(config, path, value, source="configuration"):
    """
    Set ``config[path[0]][path[1]]...`` after checking that the key exists in
    the defaults and the value has a compatible type.
    """
    default = DEFAULT_CONFIG
    target = config
    for depth, key in enumerate(path):
        if not isinstance(default, dict) or key not in default:
            raise ConfigError(
                "unknown {} key {!r}".format(source, ".".join(path[: depth + 1]))
            )
        if depth < len(path) - 1:
            default = default[key]
            target = target[key]
    default = default[path[-1]]
    if isinstance(default, dict):
        raise ConfigError("{!r} is a table, not a value".format(".".join(path)))
    if not _compatible(default, value):
        raise ConfigError(
            "{} key {!r} expects a {}, got {!r}".format(
                source, ".".join(path), type(default).__name__, value
            )
        )
    target[path[-1]] = _coerce(default, value)


def _merge(config, document, prefix=()):
    for key, value in document.items():
        path = prefix + (key,)
        if isinstance(value, dict):
            if prefix or not isinstance(DEFAULT_CONFIG.get(key), dict):
                raise ConfigError("unknown configuration table {!r}".format(".".join(path)))
            _merge(config, value, path)
        else:
            set_value(config, list(path), value)


def load_config(path=None, text=None):
    """
    Return the defaults merged with a TOML document read from ``path`` (or
    given as ``text``).

    Raises:
        ConfigError: on unreadable files, TOML syntax errors (with line and
            column), unknown keys and mistyped values
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path:
        try:
            with open(path, "r") as f:
                text = f.read()
        except (IOError, OSError) as e:
            raise ConfigError("cannot read configuration {}: {}".format(path, e))
    if text:
        _merge(config, toml_loads(text))
    return config


def apply_overrides(config, items):
    """Apply ``--set`` items ``section.key=value`` in order."""
    for item in items or []:
        path, value = parse_override(item)
        set_value(config, path, value, source="override")
    return config


def dump_config(config):
    return toml_dumps(config)
