"""
The two concrete scale constructions used by the model problems:

* :func:`build_fourier_scale` -- periodic Sobolev scale ``H^s_per`` in the
  real trigonometric basis, eigenvalue ``1 + k**2`` per wavenumber;
* :func:`build_pencil_scale` -- discrete interval scale from the generalized
  eigenproblem ``A phi = lambda M phi`` of two Gram matrices.
"""

import math

import numpy as np
import scipy.linalg

from cdislogging import get_logger

from scaletik.errors import MatrixPropertyError, NumericError, ParameterError
from scaletik.globals import (
    EIGENVALUE_FLOOR_RTOL,
    FOURIER_SCALE_LABEL,
    MAX_PENCIL_DIM,
    MAX_WAVENUMBER,
    PENCIL_RESIDUAL_RTOL,
    PENCIL_SCALE_LABEL,
    PERIOD,
)
from scaletik.scales.scale import SpectralScale


logger = get_logger(__name__)


def fourier_eigenvalues(max_wavenumber):
    """Eigenvalues in basis order ``1, cos 1, sin 1, cos 2, sin 2, ...``."""
    k = np.arange(1, max_wavenumber + 1, dtype=float)
    return np.concatenate([[1.0], np.repeat(1.0 + k**2, 2)])


def fourier_wavenumbers(max_wavenumber):
    """Wavenumber attached to each spectral index."""
    return np.concatenate([[0], np.repeat(np.arange(1, max_wavenumber + 1), 2)])


def build_fourier_scale(max_wavenumber, period=PERIOD):
    """
    Build the periodic scale on ``(0, period)``.

    The basis ``{1, cos(2 pi k t / P), sin(2 pi k t / P) : 1 <= k <= K}`` is
    normalized in ``L^2(0, P)``. Primal coefficients are nodal values on a
    uniform grid ``t_j = j P / N`` with ``N >= 2K + 1``; ``from_spectral``
    samples on ``N = 2K + 1`` nodes unless ``n_nodes`` is given. With
    ``N = 2K + 1`` both transforms are exact inverses.

    Args:
        max_wavenumber (int): truncation K, ``0 <= K <= MAX_WAVENUMBER``
        period (float): length of the periodicity interval

    Return:
        SpectralScale: scale of dimension ``2K + 1``
    """
    if int(max_wavenumber) != max_wavenumber or max_wavenumber < 0:
        raise ParameterError(
            "max_wavenumber must be a non-negative integer, got {}".format(
                max_wavenumber
            )
        )
    if max_wavenumber > MAX_WAVENUMBER:
        raise ParameterError(
            "max_wavenumber {} exceeds the cap {}".format(max_wavenumber, MAX_WAVENUMBER)
        )
    if period <= 0:
        raise ParameterError("period must be positive, got {}".format(period))
    K = int(max_wavenumber)
    dim = 2 * K + 1
    root_period = math.sqrt(period)

    def to_spectral(values):
        n_nodes = values.shape[-1]
        if n_nodes < dim:
            raise ParameterError(
                "need at least {} nodal values for K={}, got {}".format(dim, K, n_nodes)
            )
        spectrum = np.fft.rfft(values)
        coeffs = np.empty(dim)
        coeffs[0] = root_period / n_nodes * spectrum[0].real
        scale = math.sqrt(2.0 * period) / n_nodes
        coeffs[1::2] = scale * spectrum[1 : K + 1].real
        coeffs[2::2] = -scale * spectrum[1 : K + 1].imag
        return coeffs

    def from_spectral(coeffs, n_nodes=None):
        n_nodes = dim if n_nodes is None else int(n_nodes)
        if n_nodes < dim:
            raise ParameterError(
                "need at least {} nodes for K={}, got {}".format(dim, K, n_nodes)
            )
        spectrum = np.zeros(n_nodes // 2 + 1, dtype=complex)
        spectrum[0] = n_nodes * coeffs[0] / root_period
        scale = n_nodes / math.sqrt(2.0 * period)
        spectrum[1 : K + 1] = scale * (coeffs[1::2] - 1j * coeffs[2::2])
        return np.fft.irfft(spectrum, n=n_nodes)

    scale = SpectralScale(
        fourier_eigenvalues(K), to_spectral, from_spectral, FOURIER_SCALE_LABEL
    )
    logger.debug("built %s", scale)
    return scale


def _check_gram(name, matrix):
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise MatrixPropertyError("{} must be a square matrix".format(name))
    if not np.allclose(matrix, matrix.T, rtol=1e-12, atol=1e-14 * np.abs(matrix).max()):
        raise MatrixPropertyError("{} is not symmetric".format(name))
    try:
        scipy.linalg.cholesky(matrix, lower=True)
    except np.linalg.LinAlgError:
        raise MatrixPropertyError("{} is not positive definite".format(name))
    return 0.5 * (matrix + matrix.T)


def build_pencil_scale(mass_gram, smooth_gram):
    """
    Build a scale from the generalized eigenproblem ``A phi = lambda M phi``.

    With M-orthonormal eigenvectors ``Phi`` the spectral coefficients of a
    primal vector ``v`` are ``Phi^T M v``, so that ``v^T M v`` is the squared
    ``X_0`` norm and ``v^T A v`` the squared ``X_1`` norm.

    Args:
        mass_gram: symmetric positive definite ``M``
        smooth_gram: symmetric positive definite ``A`` with ``A >= M``

    Raises:
        MatrixPropertyError: if an input is not symmetric positive definite or
            the pencil has an eigenvalue below one
        NumericError: if the eigen-solver fails or its residual is too large
    """
    M = _check_gram("mass_gram", mass_gram)
    A = _check_gram("smooth_gram", smooth_gram)
    if M.shape != A.shape:
        raise MatrixPropertyError(
            "Gram matrices differ in shape: {} vs {}".format(M.shape, A.shape)
        )
    if M.shape[0] > MAX_PENCIL_DIM:
        raise ParameterError(
            "pencil dimension {} exceeds the cap {}".format(M.shape[0], MAX_PENCIL_DIM)
        )

    try:
        eigenvalues, vectors = scipy.linalg.eigh(A, M)
    except np.linalg.LinAlgError as e:
        raise NumericError("generalized eigen-solver failed: {}".format(e))

    residual = np.linalg.norm(A @ vectors - (M @ vectors) * eigenvalues) / max(
        1.0, np.linalg.norm(A)
    )
    if not np.isfinite(residual) or residual > PENCIL_RESIDUAL_RTOL:
        raise NumericError(
            "generalized eigen-solver residual {:.3e} too large".format(residual),
            json={"residual": float(residual)},
        )

    floor_tol = EIGENVALUE_FLOOR_RTOL * max(1.0, eigenvalues[-1])
    if eigenvalues[0] < 1.0 - floor_tol:
        raise MatrixPropertyError(
            "pencil has eigenvalue {:.6e} below one; smooth_gram must dominate "
            "mass_gram".format(eigenvalues[0])
        )
    eigenvalues = np.maximum(eigenvalues, 1.0)

    projector = vectors.T @ M

    def to_spectral(values):
        return projector @ values

    def from_spectral(coeffs):
        return vectors @ coeffs

    scale = SpectralScale(eigenvalues, to_spectral, from_spectral, PENCIL_SCALE_LABEL)
    scale.eigenvectors = vectors
    scale.mass_gram = M
    logger.debug("built %s (eigen residual %.2e)", scale, residual)
    return scale
