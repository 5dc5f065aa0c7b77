"""
Tikhonov functional, its minimization and the parameter choice rules.
"""

from scaletik.regularization.rules import (
    DiscrepancyResult,
    apriori_alpha,
    apriori_exponent,
    discrepancy_alpha_floor,
    discrepancy_run,
    lemma_norm_bound,
    lemma_residual_bound,
    noise_to_alpha_ratio,
    simple_alpha,
    simple_rule_bound,
    theoretical_rate,
)
from scaletik.regularization.tikhonov import (
    MinimizeReport,
    TikhonovSetup,
    functional_value,
    gauss_newton,
    minimize,
)
