"""Exception hierarchy.

``ConfigError`` covers bad user input; everything else under ``NumericalError``
is raised by the solvers. The CLI maps the two families onto exit codes 2 and 3.
"""


class DimerError(Exception):
    """Base class for all package errors."""


class ConfigError(DimerError, ValueError):
    pass


class NumericalError(DimerError, ArithmeticError):
    pass


class DegenerateGeometryError(NumericalError, ValueError):
    """R = 0: the single-excitation doublet is degenerate and beta is undefined."""


class DomainError(NumericalError, ValueError):
    pass


class NonUniqueSteadyStateError(NumericalError):
    def __init__(self, null_dim, singular_values=None):
        self.null_dim = null_dim
        self.singular_values = singular_values
        super().__init__(
            f"Liouvillian null space has dimension {null_dim}; steady state is not unique"
        )


class SingularResolventError(NumericalError):
    def __init__(self, omega, cond):
        self.omega = omega
        self.cond = cond
        super().__init__(
            f"resolvent (L + i w) is singular at w = {omega!r} (condition ~ {cond:.3g}); "
            "use a finite detector linewidth"
        )


class UndefinedCorrelationError(NumericalError):
    pass


class StepSizeError(NumericalError):
    pass


class NoSignalError(NumericalError):
    pass
