import copy
import logging
import os

import pytest
from mock import patch

from scaletik.config import (
    DEFAULT_CONFIG,
    apply_overrides,
    configure_logging,
    dump_config,
    load_config,
)
from scaletik.errors import ConfigError


def test_defaults_are_copied():
    config = load_config()
    assert config == DEFAULT_CONFIG
    config["smoothing"]["norms"].append(2.0)
    assert DEFAULT_CONFIG["smoothing"]["norms"] == [0.0, 1.0]


def test_merge_file(tmpdir):
    path = tmpdir.join("run.toml")
    path.write('seed = 5\n\n[smoothing]\nK = 512\ns = 1\nnorms = [0, 1]\n\n[param-id]\nrule = "simple"\n')
    config = load_config(str(path))
    assert config["seed"] == 5
    assert config["smoothing"]["K"] == 512
    assert config["smoothing"]["s"] == 1.0
    assert isinstance(config["smoothing"]["s"], float)
    assert config["smoothing"]["norms"] == [0.0, 1.0]
    assert all(isinstance(r, float) for r in config["smoothing"]["norms"])
    assert config["smoothing"]["deltas"] == [3, 14]
    assert config["param-id"]["rule"] == "simple"
    assert config["param-id"]["grid_n"] == DEFAULT_CONFIG["param-id"]["grid_n"]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("[smoothing]\nfoo = 1\n", "unknown configuration key 'smoothing.foo'"),
        ("[deblurring]\nK = 1\n", "unknown configuration table 'deblurring'"),
        ("[smoothing.extra]\nK = 1\n", "unknown configuration table 'smoothing.extra'"),
        ('seed = "x"\n', "expects a int"),
        ("seed = true\n", "expects a int"),
        ("[smoothing]\nK = 2.5\n", "expects a int"),
        ("[smoothing]\nnorms = [0, \"a\"]\n", "expects a list"),
        ("smoothing = 3\n", "is a table"),
    ],
)
def test_invalid_documents(text, fragment):
    with pytest.raises(ConfigError) as excinfo:
        load_config(text=text)
    assert fragment in excinfo.value.message
    assert excinfo.value.code == 400


def test_syntax_error_position():
    with pytest.raises(ConfigError) as excinfo:
        load_config(text="seed = 1\nworkers = \n")
    assert excinfo.value.line == 2
    assert excinfo.value.json["line"] == 2


def test_missing_file(tmpdir):
    with pytest.raises(ConfigError) as excinfo:
        load_config(str(tmpdir.join("missing.toml")))
    assert "cannot read configuration" in excinfo.value.message


def test_overrides_apply_in_order():
    config = apply_overrides(
        load_config(),
        ["smoothing.K=4096", "param-id.rule=simple", "seed=9", "seed=10", "tables.formats=[\"csv\"]"],
    )
    assert config["smoothing"]["K"] == 4096
    assert config["param-id"]["rule"] == "simple"
    assert config["seed"] == 10
    assert config["tables"]["formats"] == ["csv"]
    assert apply_overrides(load_config(), None) == DEFAULT_CONFIG


def test_unknown_override():
    with pytest.raises(ConfigError) as excinfo:
        apply_overrides(load_config(), ["smoothing.Q=1"])
    assert "unknown override key 'smoothing.Q'" in excinfo.value.message


def test_dump_round_trip():
    config = apply_overrides(load_config(), ["smoothing.u=1.5", "verify.checks=[\"adjoint_identity\"]"])
    assert load_config(text=dump_config(config)) == config
    assert load_config(text=dump_config(DEFAULT_CONFIG)) == DEFAULT_CONFIG


def test_configure_logging():
    logging.getLogger("scaletik.config")
    assert configure_logging(debug=True) == logging.DEBUG
    assert logging.getLogger("scaletik.config").level == logging.DEBUG
    with patch.dict(os.environ, {"SCALETIK_DEBUG": "False"}):
        assert configure_logging() == logging.INFO
    assert logging.getLogger("scaletik.config").level == logging.INFO
    with patch.dict(os.environ, {"SCALETIK_DEBUG": "True"}):
        assert configure_logging() == logging.DEBUG
    configure_logging(debug=False)
