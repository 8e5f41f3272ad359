"""Exception types shared across the library."""


class GroupError(Exception):
    """Base class for all library errors."""


class VariantMismatchError(GroupError, TypeError):
    """An element does not belong to the group description it was used with."""


class CapabilityError(GroupError):
    """An operation was requested that the group description does not support,
    e.g. order comparisons on an unordered group or lattice computations over
    an infinite quotient."""


class DepthBoundError(GroupError):
    """A recursive construction exceeded its configured depth bound."""


class ResourceLimitError(GroupError):
    """A bounded search or closure exceeded its configured resource cap."""


class WordSyntaxError(GroupError, ValueError):
    """A word, cycle, or presentation string failed to parse.

    Carries the character position of the failure when known.
    """

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
