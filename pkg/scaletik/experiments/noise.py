"""
Deterministic noise calibrated to an exact level in the data norm.
"""

import numpy as np

from scaletik.errors import NumericError, ParameterError
from scaletik.globals import NOISE_GENERATOR


def euclidean_norm(y):
    return float(np.linalg.norm(y))


class NoiseModel(object):
    """
    Args:
        seed (int): 64-bit seed
        norm (callable): data-space norm the noise is calibrated in
        stream (tuple): integers selecting an independent stream for the same
            seed, e.g. ``(ladder_index, repetition)``

    Noise is drawn from ``numpy.random.Generator(PCG64)`` seeded through a
    ``SeedSequence``; the same seed and stream give bit-identical draws on
    every platform.
    """

    generator_name = NOISE_GENERATOR

    def __init__(self, seed, norm=euclidean_norm, stream=()):
        if int(seed) != seed or not 0 <= seed < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer, got {}".format(seed))
        self.seed = int(seed)
        self.norm = norm
        self.stream = tuple(int(i) for i in stream)

    def __repr__(self):
        return "NoiseModel(seed={}, stream={})".format(self.seed, self.stream)

    def for_stream(self, *stream):
        return NoiseModel(self.seed, self.norm, stream)

    def generator(self):
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        return np.random.Generator(np.random.PCG64(sequence))


def make_noisy_data(y, delta, model):
    """
    Return ``y + e`` with ``model.norm(e) == delta``. The direction of ``e`` is
    white noise in the coordinates of ``y``.

    Raises:
        NumericError: if two consecutive draws have zero norm
    """
    if delta < 0:
        raise ParameterError("delta must be >= 0, got {}".format(delta))
    y = np.asarray(y, dtype=float)
    if delta == 0:
        return y.copy()
    rng = model.generator()
    for _ in range(2):
        noise = rng.standard_normal(y.shape)
        size = model.norm(noise)
        if size > 0:
            return y + (delta / size) * noise
    raise NumericError("noise draw has zero norm", json={"seed": model.seed})
