"""Exception hierarchy. The CLI maps these onto exit statuses."""


class RMomentsError(Exception):
    """Base class for package errors."""


class InputError(RMomentsError, ValueError):
    """Malformed arguments: wrong shape, non-finite entries, out-of-range counts."""


class ValidationError(RMomentsError, ValueError):
    """A matrix or parameter set fails a density-matrix invariant."""


class StateFileError(ValidationError):
    """A state file cannot be parsed."""


class NumericalInconsistencyError(RMomentsError, ArithmeticError):
    """Moment data that no Hermitian PSD matrix could have produced."""
