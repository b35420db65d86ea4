"""Exception types shared across the package."""


class GroupError(Exception):
    """Base class for all errors raised by this package."""


class DegreeMismatch(GroupError):
    pass


class CapExceeded(GroupError):
    """An operation needed to materialize more elements than the cap allows."""


class NotInGroup(GroupError):
    pass


class NotNormal(GroupError):
    pass


class EmptySet(GroupError):
    """A probability over an empty set was requested."""


class UnknownName(GroupError):
    pass


class ParseError(GroupError):
    """Malformed textual input; carries a line number when one is known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
