"""Exception hierarchy shared by all solver modules."""


class PhysarumError(Exception):
    """Base class for every error raised by this package."""


class ParameterOutOfRange(PhysarumError, ValueError):
    pass


class AlphaOutOfRange(ParameterOutOfRange):
    pass


class DivisionBySupportContainingZero(PhysarumError, ZeroDivisionError):
    pass


class NegativeFlow(PhysarumError, ValueError):
    pass


class ValidationError(PhysarumError, ValueError):
    """Network data violates the model invariants.

    ``field`` names the offending entry (e.g. ``links[3].u``) when known.
    """

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class ParseError(PhysarumError, ValueError):
    pass


class PathNotInNetwork(PhysarumError, ValueError):
    pass


class NoPathExists(PhysarumError):
    pass


class DisconnectedSourceSink(PhysarumError):
    pass


class SingularSystem(PhysarumError):
    pass


class MismatchedNodeSets(PhysarumError, ValueError):
    pass


class UnknownFixture(PhysarumError, KeyError):
    pass


class NoConvergence(PhysarumError):
    """Iteration limit reached; ``result`` carries the partial outcome, if any."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
