"""
TOML reading and writing. ``tomllib`` ships with Python 3.11; older
interpreters use the ``tomli`` backport with the same interface.
"""

import re

import tomli_w

try:
    import tomllib
except ImportError:  # pragma: no cover
    import tomli as tomllib

from scaletik.errors import ConfigError


_POSITION = re.compile(r"\(at line (\d+), column (\d+)\)")


def toml_loads(text):
    """
    Raises:
        ConfigError: with the line and column of the parse error
    """
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        line = getattr(e, "lineno", None)
        column = getattr(e, "colno", None)
        message = getattr(e, "msg", None) or str(e)
        if line is None:
            match = _POSITION.search(str(e))
            if match:
                line, column = int(match.group(1)), int(match.group(2))
        message = _POSITION.sub("", message).strip()
        raise ConfigError("invalid TOML: {}".format(message), line, column)


def toml_dumps(document):
    return tomli_w.dumps(document)
