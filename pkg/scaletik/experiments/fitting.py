import numpy as np
import scipy.stats

from scaletik.errors import InsufficientDataError
from scaletik.globals import MIN_FIT_POINTS


def positive_pairs(deltas, errors):
    deltas = np.asarray(deltas, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = (deltas > 0) & (errors > 0) & np.isfinite(errors)
    return deltas[keep], errors[keep]


def fit_rate(deltas, errors):
    """
    Least-squares slope of ``log(error)`` against ``log(delta)``.

    Pairs with non-positive error are dropped.

    Return:
        tuple: ``(kappa_hat, r_squared)``

    Raises:
        InsufficientDataError: if fewer than three usable pairs remain
    """
    deltas, errors = positive_pairs(deltas, errors)
    if deltas.size < MIN_FIT_POINTS or np.unique(deltas).size < 2:
        raise InsufficientDataError(
            "need at least {} positive (delta, error) pairs, got {}".format(
                MIN_FIT_POINTS, deltas.size
            )
        )
    fit = scipy.stats.linregress(np.log(deltas), np.log(errors))
    return float(fit.slope), float(fit.rvalue**2)
