"""Exception hierarchy for malformed games and arguments."""


class GameError(ValueError):
    """Base class for invalid game construction or invalid arguments."""


class LengthMismatchError(GameError):
    pass


class NonzeroEmptyCoalitionError(GameError):
    pass


class SizeLimitExceededError(GameError):
    pass


class OverlappingArgumentsError(GameError):
    pass


class EmptyRestrictionError(GameError):
    pass


class InvalidCoalitionError(GameError):
    pass


class InstanceTooLargeError(GameError):
    """Raised when an exhaustive check is requested on too many players."""
