"""Exception types shared across the package."""


class FinliftError(Exception):
    """Base class for all errors raised by finlift."""


class InvalidSpace(FinliftError):
    """A relation that is not a preorder, or malformed point data."""


class NotMonotone(FinliftError):
    """A function between spaces that does not preserve the specialisation order."""


class UniverseTooLarge(FinliftError):
    """A configured size cap would be exceeded."""


class PowerTooLarge(UniverseTooLarge):
    """The retract-of-power test could not be decided within the power cap."""


class ParseError(FinliftError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} at position {pos}"
        super().__init__(message)
