"""Exception types shared across the package."""


class ForumNetError(Exception):
    """Base class for errors raised by this package."""


class InputError(ForumNetError):
    """Unreadable or structurally broken input data (CLI exit code 1)."""


class SchemaError(InputError):
    """Input file header or document shape does not match the contract."""


class ConfigError(ForumNetError, ValueError):
    """Invalid or infeasible configuration (CLI exit code 2)."""
