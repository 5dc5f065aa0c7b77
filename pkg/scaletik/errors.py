"""
Error classes. User-side problems (bad parameters, bad configuration) derive
from ``cdiserrors.UserError``; numerical failures derive from
:class:`NumericError`, which carries a json payload with the measured
quantities that made the computation fail.
"""

from cdiserrors import *

from scaletik.globals import SUPPORTED_FORMATS


class ParameterError(UserError):
    def __init__(self, message, code=400, json=None):
        super(ParameterError, self).__init__(message, code, json)
        self.args = (message,)


class InvalidElementError(ParameterError):
    pass


class DegenerateIntervalError(ParameterError):
    pass


class UndefinedRatioError(ParameterError):
    pass


class DegenerateExponentError(ParameterError):
    pass


class MatrixPropertyError(ParameterError):
    pass


class InsufficientDataError(ParameterError):
    pass


class UnsupportedError(UserError):
    def __init__(self, file_format, code=400, json=None):
        if json is None:
            json = {}
        message = "Format {} is not supported; supported formats are: {}.".format(
            file_format, ",".join(SUPPORTED_FORMATS)
        )
        super(UnsupportedError, self).__init__(message, code, json)


class ConfigError(UserError):
    def __init__(self, message, line=None, column=None, code=400):
        if line is not None:
            message = "{} (line {}, column {})".format(message, line, column)
        super(ConfigError, self).__init__(message, code, {"line": line, "column": column})
        self.args = (message,)
        self.line = line
        self.column = column


class NumericError(APIError):
    """A computation ran into a numerical failure."""

    def __init__(self, message, code=500, json=None):
        Exception.__init__(self, message)
        self.message = message
        self.code = code
        self.json = json or {}


class ScaleRangeError(NumericError):
    def __init__(self, index, exponent):
        self.index = index
        super(ScaleRangeError, self).__init__(
            "lambda ** {} overflows at spectral index {}".format(exponent, index),
            json={"index": int(index), "exponent": exponent},
        )


class SolverBreakdownError(NumericError):
    def __init__(self, interval, pivot):
        self.interval = interval
        super(SolverBreakdownError, self).__init__(
            "interval equation {} is singular (1 + int c phi_right = {:.3e})".format(
                interval, pivot
            ),
            json={"interval": int(interval), "pivot": float(pivot)},
        )


class StagnationError(NumericError):
    def __init__(self, report):
        self.report = report
        super(StagnationError, self).__init__(
            "line search exhausted without decreasing the functional "
            "(iteration {}, value {:.6e})".format(
                report.iterations, report.functional_value
            ),
            json={"iterations": report.iterations},
        )


class NoStopError(NumericError):
    def __init__(self, max_steps, last_residual, threshold):
        super(NoStopError, self).__init__(
            "discrepancy principle did not stop within {} steps "
            "(last residual {:.6e} > {:.6e})".format(
                max_steps, last_residual, threshold
            ),
            json={"max_steps": max_steps, "residual": float(last_residual)},
        )


class StudyError(NumericError):
    def __init__(self, failed, total):
        super(StudyError, self).__init__(
            "{} of {} study cells failed".format(failed, total),
            json={"failed": failed, "total": total},
        )
