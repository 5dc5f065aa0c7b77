"""
Noise generation, rate studies, exponent fitting and the verification suite.
"""

from scaletik.experiments.fitting import fit_rate
from scaletik.experiments.noise import NoiseModel, make_noisy_data
from scaletik.experiments.study import (
    RateStudyConfig,
    RateStudyResult,
    kind_for,
    load_results,
    run_study,
    run_table,
)
from scaletik.experiments.verification import VerifyReport, verify_suite
