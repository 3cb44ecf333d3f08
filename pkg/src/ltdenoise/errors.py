"""Exception hierarchy shared by the denoising modules and the CLI."""


class LtdError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(LtdError, ValueError):
    pass


class TooShortError(LtdError, ValueError):
    pass


class EmptySystemError(LtdError, ValueError):
    pass


class ZeroPivotError(LtdError, ArithmeticError):
    """Forward elimination hit a (relatively) vanishing pivot."""


class DegenerateDistributionError(LtdError, ValueError):
    pass


class BadWindowError(LtdError, ValueError):
    pass


class BadParamsError(LtdError, ValueError):
    pass


class BadKindError(LtdError, ValueError):
    pass


class EmptyRecordsError(LtdError, ValueError):
    pass


class IncompleteMatrixError(LtdError, ValueError):
    pass


class ParseError(LtdError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SchemaError(LtdError, ValueError):
    pass
