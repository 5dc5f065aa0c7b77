import pytest

from scaletik.errors import ParameterError
from scaletik.scales import StabilityParams, hoelder_exponent


def test_smoothing_variants():
    assert StabilityParams.for_smoothing("lipschitz_a1", 0.0, 0.5).as_dict() == {
        "a": 1.0,
        "gamma": 1.0,
        "s": 0.0,
        "u": 0.5,
        "r": 0.0,
    }
    hoelder = StabilityParams.for_smoothing("hoelder_a0", 1.0, 1.5, r=0.5)
    assert (hoelder.a, hoelder.gamma, hoelder.r) == (0.0, 0.5, 0.5)
    with pytest.raises(ParameterError):
        StabilityParams.for_smoothing("lipschitz", 0.0, 0.5)


def test_param_id_parameters():
    sp = StabilityParams.for_param_id(2.0, 2.0)
    assert sp.a == 0.0
    assert sp.gamma == pytest.approx(2.0 / 3.0)
    with pytest.raises(ParameterError):
        StabilityParams.for_param_id(0.0, 1.0)


@pytest.mark.parametrize("a, gamma", [(-0.5, 1.0), (1.0, 0.0), (1.0, 1.5)])
def test_invalid_parameters(a, gamma):
    with pytest.raises(ParameterError):
        StabilityParams(a, gamma, 0.0, 1.0)


def test_theory_violations():
    assert StabilityParams(1.0, 1.0, 0.0, 0.5).theory_violations() == []
    assert StabilityParams(1.0, 1.0, 0.0, 1.5).theory_violations() == ["u <= 2s + a"]
    assert StabilityParams(1.0, 1.0, 1.0, 0.5).theory_violations() == ["s <= u"]
    assert StabilityParams(0.0, 1.0, -1.0, 0.5).theory_violations() == ["-a <= s"]


def test_rate_violations_include_norm():
    sp = StabilityParams(1.0, 1.0, 0.0, 1.0)
    assert sp.rate_violations() == []
    assert sp.with_norm(1.0).rate_violations() == ["-a <= r <= s"]
    assert sp.with_norm(1.0).check("test", include_norm=False) == []
    assert sp.with_norm(-2.0).check("test") == ["-a <= r <= s"]


def test_equality():
    assert StabilityParams(1.0, 1.0, 0.0, 0.5) == StabilityParams(1, 1, 0, 0.5)
    assert StabilityParams(1.0, 1.0, 0.0, 0.5) != StabilityParams(1.0, 1.0, 0.0, 1.0)


def test_hoelder_exponent():
    assert hoelder_exponent(1.0, 1.0, 0.0) == pytest.approx(0.5)
    assert hoelder_exponent(1.0, 1.0, 1.0) == pytest.approx(1.0)
    with pytest.raises(ParameterError):
        hoelder_exponent(0.0, 1.0, 1.0)
