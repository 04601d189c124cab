"""Exception hierarchy shared by all modules."""


class PucciError(Exception):
    """Base class for errors raised by this package."""


class DomainError(PucciError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ResolutionError(PucciError):
    """Sampled data is too coarse for the requested derivative."""


class InvalidProfileError(PucciError, ValueError):
    """A profile curve violates the requirements of a hypersurface of revolution."""


class InvalidTestFunctionError(PucciError, ValueError):
    """A Barta test function is not sign-definite on the open ball."""


class NoConvergenceError(PucciError):
    """The eigenvalue bracket could not be established."""


class InconsistencyError(PucciError):
    """A computed result fails a self-consistency audit."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value
