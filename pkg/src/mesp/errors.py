"""Exception hierarchy.

Every error carries a short machine-readable ``code`` (for example
``NOT_STRICTLY_INCREASING``) in addition to the human message.
"""


class MespError(Exception):
    code = "ERROR"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self):
        return f"{self.code}: {self.args[0]}"


class ValidationError(MespError, ValueError):
    """Invalid input: malformed grid, tails, selection, formula, ..."""

    code = "INVARIANT_VIOLATION"


class ParseError(ValidationError):
    code = "PARSE_ERROR"

    def __init__(self, message, locus=None, code=None):
        if locus:
            message = f"{locus}: {message}"
        super().__init__(message, code)
        self.locus = locus


class BudgetExceeded(MespError):
    code = "BUDGET_EXCEEDED"


class PrecisionInsufficient(MespError):
    code = "PRECISION_INSUFFICIENT"


class DimensionUnsupported(MespError):
    code = "DIMENSION_UNSUPPORTED"


class ZeroProbabilityUnhandled(MespError):
    code = "ZERO_PROBABILITY_UNHANDLED"


class CertificationFailed(MespError):
    code = "CERTIFICATION_FAILED"


class UnknownSuite(MespError, KeyError):
    code = "UNKNOWN_SUITE"
