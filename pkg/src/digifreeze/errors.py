"""Exception types raised by digifreeze."""


class DigifreezeError(ValueError):
    """Base class for invalid input to any digifreeze operation."""


class DimensionError(DigifreezeError):
    """Points of different lengths, or a dimension outside the supported range."""


class AdjacencyError(DigifreezeError):
    """The adjacency parameter u is outside [1, n]."""


class PointNotInImage(DigifreezeError):
    """A point that must belong to the image does not."""


class PreconditionError(DigifreezeError):
    """An operation's stated precondition does not hold for its arguments."""


class DecompositionError(DigifreezeError):
    """A cube decomposition does not cover its image exactly."""


class DisconnectedImageError(DigifreezeError):
    """A construction that requires a connected image got a disconnected one."""


class NotFrozenError(DigifreezeError):
    """A set that was required to be a freezing set is not one.

    ``outcome`` carries the :class:`~digifreeze.verify.VerifyOutcome` with the
    witness that proves it.
    """

    def __init__(self, message, outcome=None):
        super().__init__(message)
        self.outcome = outcome


class SearchGuardError(DigifreezeError):
    """The exhaustive enumerator refused an image above its size guard."""


class InconclusiveError(RuntimeError):
    """The search exhausted its node budget before reaching a verdict."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats
