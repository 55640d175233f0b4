"""Exception hierarchy.

Each exception carries the CLI exit code it maps to: 2 for bad input, 3 for
resource limits, 4 for numerical failures.
"""


class L2Error(Exception):
    exit_code = 4


class InputError(L2Error, ValueError):
    exit_code = 2


class SpecMismatchError(InputError):
    """Operands belong to different groups, or an element has the wrong shape."""


class DimensionError(InputError):
    """Matrix shapes do not compose."""


class InvalidComplexError(InputError):
    """A cochain complex failed validation (d o d != 0 or bad shapes)."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAChainMapError(InputError):
    pass


class SupportCollisionError(InputError):
    """A quotient level is too coarse to represent an operator faithfully."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class ScheduleOverflowError(L2Error):
    """A compression would exceed the configured dimension cap."""

    exit_code = 3


class NumericalError(L2Error):
    exit_code = 4


class ZeroOperatorError(NumericalError):
    """Every eigenvalue fell below the kernel threshold."""


class SingularOperatorError(NumericalError):
    pass


class NotAcyclicError(NumericalError):
    """Mapping cone has non-vanishing cohomology in exact mode."""
