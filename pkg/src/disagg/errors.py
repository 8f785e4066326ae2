"""Exception types shared across the package."""


class DisaggError(Exception):
    """Base class for all package errors."""


class ConfigError(DisaggError, ValueError):
    """Invalid configuration input; the message names the offending field."""


class CatalogError(DisaggError, LookupError):
    """Unknown technology name in a catalog lookup."""


class ModelError(DisaggError, ValueError):
    """Model precondition violated (degenerate or out-of-domain input)."""
