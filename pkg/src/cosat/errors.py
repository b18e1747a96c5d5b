"""Exception types shared across the package."""


class CosatError(Exception):
    """Base class for all solver errors."""


class ParseError(CosatError):
    """Concrete-syntax error; carries the offset of the offending token."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class LogicMismatchError(ParseError):
    """A modal operator was used under a logic that does not provide it."""


class UnknownAtomError(CosatError):
    """A sign map or carrier assignment is missing a required atom."""


class ResourceLimitError(CosatError):
    """A configured search bound was exceeded; no verdict was produced."""


class ModelFormatError(CosatError):
    """A serialized witness model violates the JSON schema."""


class InternalCheckError(CosatError):
    """An internal consistency assertion failed; indicates a solver bug."""
