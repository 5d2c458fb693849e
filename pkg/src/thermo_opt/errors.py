"""Exception hierarchy.

Every error carries its class name so the command line can report it
verbatim. ``ValidationError`` subclasses describe bad input (exit code 2),
everything else deriving from ``ThermoError`` is a computation failure
(exit code 3).
"""


class ThermoError(Exception):
    """Base class for all library errors."""

    @property
    def name(self):
        return type(self).__name__


class ValidationError(ThermoError, ValueError):
    """Input does not satisfy a documented precondition."""


class ComputationError(ThermoError, RuntimeError):
    """A computation could not produce a trustworthy result."""


# shift-core
class NotSquare(ValidationError):
    pass


class ZeroRowOrColumn(ValidationError):
    pass


class NotAdmissible(ValidationError):
    pass


class NotMixing(ComputationError):
    pass


class NoPrimitiveLevels(ComputationError):
    pass


# potentials
class NonPositiveNorm(ComputationError):
    pass


class SingularProduct(ComputationError):
    pass


class AlmostAdditivityViolated(ComputationError):
    pass


class DivergentTail(ValidationError):
    pass


class NotAlmostAdditive(ComputationError):
    pass


# pressure
class EmptyPeriodicSet(ComputationError):
    pass


class BracketTooWide(ComputationError):
    pass


class InsufficientCurve(ValidationError):
    pass


class DepthMismatch(ValidationError):
    pass


# gibbs
class DepthTooShallow(ValidationError):
    pass


class MissingConnectivity(ValidationError):
    pass


class MissingPressure(ValidationError):
    pass


class NormalizationDrift(ComputationError):
    pass


# zero-temperature / jsr / lyapunov
class InconsistentBracket(ComputationError):
    pass


class NotInClassR(ValidationError):
    pass


class NoPositivityRatio(ValidationError):
    pass


class NotExpanding(ValidationError):
    pass


class ModelError(ValidationError):
    """The JSON model file is malformed."""
