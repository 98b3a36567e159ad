"""Exception hierarchy shared by all climarma modules."""


class ClimarmaError(Exception):
    """Base class for all errors raised by this package."""


class InsufficientDataError(ClimarmaError):
    """Series too short for the requested operation."""


class DimensionError(ClimarmaError):
    """Mismatched lengths or shapes between inputs."""


class RangeError(ClimarmaError):
    """Argument outside its documented range."""


class AdmissibilityError(ClimarmaError):
    """ARMA parameters violate stationarity or invertibility."""


class NumericalDegeneracyError(ClimarmaError):
    """A recursion or factorization lost numerical validity."""


class DegenerateInputError(ClimarmaError):
    """Input is structurally degenerate (zero variance, singular design)."""


class NonConvergenceError(ClimarmaError):
    """Optimizer failed to converge; carries the best fit found so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class IngestionError(ClimarmaError):
    """Input file could not be parsed into a valid series."""


class AlignmentError(ClimarmaError):
    """Two series do not share the same time index."""


class AnalysisStageError(ClimarmaError):
    """A pipeline stage failed; carries the stage name and original error."""

    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
