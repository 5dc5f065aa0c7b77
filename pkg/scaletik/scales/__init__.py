"""
Hilbert scales stored through the spectrum of their generator.
"""

from scaletik.scales.builders import (
    build_fourier_scale,
    build_pencil_scale,
    fourier_eigenvalues,
    fourier_wavenumbers,
)
from scaletik.scales.scale import (
    ScaleElement,
    SpectralScale,
    apply_power,
    interpolation_ratio,
    satisfies_interpolation,
    scale_norm,
)
from scaletik.scales.stability import StabilityParams, hoelder_exponent
