import itertools
import math

import numpy as np
import pytest

from scaletik.errors import (
    DegenerateIntervalError,
    InvalidElementError,
    MatrixPropertyError,
    ParameterError,
    ScaleRangeError,
    UndefinedRatioError,
)
from scaletik.scales import (
    SpectralScale,
    apply_power,
    build_fourier_scale,
    build_pencil_scale,
    fourier_eigenvalues,
    fourier_wavenumbers,
    interpolation_ratio,
    satisfies_interpolation,
    scale_norm,
)


INDICES = [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0]


def identity(values):
    return values


def diagonal_scale(eigenvalues):
    return SpectralScale(eigenvalues, identity, identity, "test")


def test_fourier_eigenvalues():
    assert fourier_eigenvalues(1).tolist() == [1.0, 2.0, 2.0]
    assert fourier_eigenvalues(2).tolist() == [1.0, 2.0, 2.0, 5.0, 5.0]
    assert fourier_wavenumbers(2).tolist() == [0, 1, 1, 2, 2]


def test_fourier_scale_dimension():
    assert build_fourier_scale(0).dim == 1
    assert build_fourier_scale(16).dim == 33


@pytest.mark.parametrize("K", [-1, 1.5, 4097])
def test_fourier_scale_rejects_bad_truncation(K):
    with pytest.raises(ParameterError):
        build_fourier_scale(K)


def test_fourier_scale_rejects_bad_period():
    with pytest.raises(ParameterError):
        build_fourier_scale(4, period=0.0)


def test_fourier_parseval():
    """Sampled sin(3t)/sqrt(pi) has unit norm in X_0."""
    scale = build_fourier_scale(16)
    t = 2.0 * math.pi * np.arange(4096) / 4096
    x = scale.from_primal(np.sin(3.0 * t) / math.sqrt(math.pi))
    assert abs(scale_norm(x, 0.0) - 1.0) < 1e-10
    assert abs(x.coeffs[6] - 1.0) < 1e-10


def test_fourier_basis_functions(fourier_scale):
    t = 2.0 * math.pi * np.arange(64) / 64
    expected = {
        0: np.full(64, 1.0 / math.sqrt(2.0 * math.pi)),
        1: np.cos(t) / math.sqrt(math.pi),
        2: np.sin(t) / math.sqrt(math.pi),
        6: np.sin(3.0 * t) / math.sqrt(math.pi),
    }
    for index, values in expected.items():
        coeffs = np.zeros(fourier_scale.dim)
        coeffs[index] = 1.0
        assert np.allclose(fourier_scale.from_spectral(coeffs, 64), values, atol=1e-13)


def test_fourier_round_trip(fourier_scale, rng):
    coeffs = rng.standard_normal(fourier_scale.dim)
    assert np.allclose(
        fourier_scale.to_spectral(fourier_scale.from_spectral(coeffs)), coeffs, rtol=1e-12, atol=1e-12
    )
    oversampled = fourier_scale.from_spectral(coeffs, 200)
    assert np.allclose(fourier_scale.to_spectral(oversampled), coeffs, atol=1e-12)


def test_fourier_too_few_nodes(fourier_scale):
    with pytest.raises(ParameterError):
        fourier_scale.to_spectral(np.zeros(10))
    with pytest.raises(ParameterError):
        fourier_scale.from_spectral(np.zeros(fourier_scale.dim), 10)


def test_norm_matches_independent_sum(fourier_scale, rng):
    x = fourier_scale.element(rng.standard_normal(fourier_scale.dim))
    for s in INDICES:
        expected = math.sqrt(sum(lam**s * c**2 for lam, c in zip(fourier_scale.eigenvalues, x.coeffs)))
        assert scale_norm(x, s) == pytest.approx(expected, rel=1e-12)


def test_norm_of_zero_and_mode():
    scale = diagonal_scale([1.0, 4.0])
    assert scale_norm(scale.zero(), 1.0) == 0.0
    assert scale_norm(scale.element([0.0, 1.0]), 2.0) == pytest.approx(4.0)
    assert scale_norm(scale.element([0.0, 1.0]), -2.0) == pytest.approx(0.25)


def test_apply_power(fourier_scale, rng):
    x = fourier_scale.element(rng.standard_normal(fourier_scale.dim))
    for s in INDICES:
        assert scale_norm(apply_power(x, s), 0.0) == pytest.approx(scale_norm(x, s), rel=1e-12)
    assert np.array_equal(apply_power(x, 0.0).coeffs, x.coeffs)


def test_powers_out_of_range():
    scale = build_fourier_scale(16)
    with pytest.raises(ScaleRangeError) as excinfo:
        scale.powers(1000.0)
    assert excinfo.value.index == 3


def test_non_finite_element_rejected(fourier_scale):
    coeffs = np.zeros(fourier_scale.dim)
    coeffs[2] = np.nan
    with pytest.raises(InvalidElementError):
        scale_norm(fourier_scale.element(coeffs), 1.0)


def test_element_shape_checked(fourier_scale):
    with pytest.raises(InvalidElementError):
        fourier_scale.element(np.zeros(fourier_scale.dim + 1))


def test_element_arithmetic(fourier_scale, rng):
    x = fourier_scale.element(rng.standard_normal(fourier_scale.dim))
    y = fourier_scale.element(rng.standard_normal(fourier_scale.dim))
    assert np.allclose((x - y).coeffs, x.coeffs - y.coeffs)
    assert np.allclose((2.0 * x + y).coeffs, 2.0 * x.coeffs + y.coeffs)
    assert np.allclose((-x).coeffs, -x.coeffs)
    with pytest.raises(ParameterError):
        x + build_fourier_scale(16).zero()


def test_invalid_eigenvalues():
    with pytest.raises(ParameterError):
        diagonal_scale([1.0, 0.0])
    with pytest.raises(ParameterError):
        diagonal_scale([2.0, 1.0])
    with pytest.raises(ParameterError):
        diagonal_scale([])


def test_interpolation_ratio_equal_indices():
    scale = diagonal_scale([1.0, 4.0])
    assert interpolation_ratio(scale.element([1.0, 1.0]), 0.0, 0.0, 2.0) == pytest.approx(1.0)


def test_interpolation_ratio_two_modes():
    scale = diagonal_scale([1.0, 4.0])
    x = scale.element([1.0, 1.0])
    expected = math.sqrt(5.0) / (math.sqrt(2.0) ** 0.5 * math.sqrt(17.0) ** 0.5)
    ratio = interpolation_ratio(x, 0.0, 1.0, 2.0)
    assert ratio == pytest.approx(expected, rel=1e-14)
    assert ratio < 1.0


def test_interpolation_ratio_of_single_mode(fourier_scale):
    coeffs = np.zeros(fourier_scale.dim)
    coeffs[9] = 3.0
    x = fourier_scale.element(coeffs)
    assert interpolation_ratio(x, -1.0, 0.5, 2.0) == pytest.approx(1.0, rel=1e-12)


def test_interpolation_inequality(fourier_scale, rng):
    triples = [
        triple
        for triple in itertools.combinations_with_replacement(INDICES, 3)
        if triple[0] < triple[2]
    ]
    for _ in range(20):
        x = fourier_scale.element(rng.standard_normal(fourier_scale.dim))
        for p, q, r in triples:
            assert satisfies_interpolation(x, p, q, r)


def test_interpolation_errors(fourier_scale):
    x = fourier_scale.element(np.ones(fourier_scale.dim))
    with pytest.raises(DegenerateIntervalError):
        interpolation_ratio(x, 1.0, 1.0, 1.0)
    with pytest.raises(UndefinedRatioError):
        interpolation_ratio(fourier_scale.zero(), 0.0, 1.0, 2.0)
    with pytest.raises(ParameterError):
        interpolation_ratio(x, 2.0, 1.0, 0.0)


def test_pencil_diagonal():
    scale = build_pencil_scale(np.eye(2), np.diag([1.0, 4.0]))
    assert np.allclose(scale.eigenvalues, [1.0, 4.0])
    assert np.allclose(np.abs(scale.eigenvectors), np.eye(2))


def test_pencil_norms(spline_space, pencil_scale, rng):
    M, A = spline_space.mass_gram, spline_space.h1_gram
    for _ in range(20):
        v = rng.standard_normal(spline_space.dim)
        x = pencil_scale.from_primal(v)
        assert x.norm(0.0) ** 2 == pytest.approx(v @ M @ v, rel=1e-9)
        assert x.norm(1.0) ** 2 == pytest.approx(v @ A @ v, rel=1e-9)


def test_pencil_round_trip(pencil_scale, rng):
    coeffs = rng.standard_normal(pencil_scale.dim)
    back = pencil_scale.to_spectral(pencil_scale.from_spectral(coeffs))
    assert np.linalg.norm(back - coeffs) <= 1e-12 * np.linalg.norm(coeffs)


def test_pencil_floor(pencil_scale):
    assert pencil_scale.eigenvalues[0] >= 1.0
    assert np.all(np.diff(pencil_scale.eigenvalues) >= 0)


def test_monotone_embedding(pencil_scale, fourier_scale, rng):
    for scale in (pencil_scale, fourier_scale):
        x = scale.element(rng.standard_normal(scale.dim))
        norms = [x.norm(s) for s in INDICES]
        assert all(low <= high * (1.0 + 1e-12) for low, high in zip(norms, norms[1:]))


def test_pencil_rejects_bad_grams():
    with pytest.raises(MatrixPropertyError):
        build_pencil_scale(np.array([[1.0, 0.5], [0.0, 1.0]]), np.eye(2))
    with pytest.raises(MatrixPropertyError):
        build_pencil_scale(np.eye(2), np.diag([1.0, -1.0]))
    with pytest.raises(MatrixPropertyError):
        build_pencil_scale(np.eye(2), np.eye(3))
    with pytest.raises(MatrixPropertyError):
        build_pencil_scale(2.0 * np.eye(2), np.eye(2))
