class MgrackError(Exception):
    """Base class for all library errors."""


class FormatError(MgrackError, ValueError):
    """Malformed input: wrong shapes, unknown fields, bad references."""


class ConstructionError(MgrackError, ValueError):
    """A construction's precondition does not hold (e.g. N not normal)."""


class DiagramError(MgrackError, ValueError):
    """A diagram fails validation."""


class MoveError(MgrackError, ValueError):
    """A move's site does not match the expected local pattern."""


class CocycleInvalid(MgrackError):
    """The twisted operations do not form a multiple group rack.

    ``violation`` holds the first failing axiom instance.
    """

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation
