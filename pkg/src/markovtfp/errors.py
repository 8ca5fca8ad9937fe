"""Exception types shared by all modules."""


class MarkovTFPError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(MarkovTFPError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class ResourceError(MarkovTFPError, RuntimeError):
    """A configured size, enumeration or time budget was exceeded (CLI exit code 3)."""
