"""
Parsing of command-line values, ``--set`` overrides and results documents.
"""

from collections import Counter
import simplejson

from cdislogging import get_logger

from scaletik.errors import ConfigError, UserError
from scaletik.utils.toml import toml_loads


logger = get_logger(__name__)


def oph_raise_for_duplicates(object_pairs):
    """
    Given an list of ordered pairs, construct a dict as with the normal JSON
    ``object_pairs_hook``, but raise an exception if there are duplicate keys
    with a message describing all violations.
    """
    counter = Counter(p[0] for p in object_pairs)
    duplicates = [p for p in counter.items() if p[1] > 1]
    if duplicates:
        raise ValueError(
            "The document contains duplicate keys: {}".format(
                ",".join(d[0] for d in duplicates)
            )
        )
    return {pair[0]: pair[1] for pair in object_pairs}


def parse_json(raw):
    """
    Return a python representation of a JSON document.

    Raises:
        UserError: if the document is not valid JSON or repeats a key
    """
    try:
        return simplejson.loads(raw, object_pairs_hook=oph_raise_for_duplicates)
    except Exception as e:
        logger.error("Unable to parse results document: {}".format(e))
        raise UserError("Unable to parse json: {}".format(e))


def parse_value(raw):
    """Read ``raw`` as a TOML literal, falling back to the plain string."""
    try:
        return toml_loads("value = {}".format(raw))["value"]
    except ConfigError:
        return raw


def parse_override(item):
    """
    Split a ``--set`` item ``section.key=value`` into ``(["section", "key"],
    value)``.
    """
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError("override {!r} is not of the form key=value".format(item))
    path = key.split(".")
    if any(not part for part in path):
        raise ConfigError("override key {!r} has an empty component".format(key))
    return path, parse_value(raw.strip())


def parse_ladder(raw):
    """``"3..14"`` -> ``[3, 14]``."""
    start, sep, stop = str(raw).partition("..")
    try:
        if not sep:
            raise ValueError(raw)
        return [int(start), int(stop)]
    except ValueError:
        raise ConfigError("noise ladder {!r} is not of the form j0..j1".format(raw))


def parse_norms(raw):
    """``"0,1"`` -> ``[0.0, 1.0]``."""
    try:
        return [float(part) for part in str(raw).split(",") if part.strip()]
    except ValueError:
        raise ConfigError("norm list {!r} is not a comma separated list".format(raw))
