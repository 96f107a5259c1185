"""File-format and configuration errors. All are ValueErrors."""


class FormatVersionError(ValueError):
    """The file declares another format or an unsupported version."""


class SortOrderError(ValueError):
    """Event records are not in non-decreasing time order."""


class MalformedRowError(ValueError):
    """A header line, column set or record cannot be parsed."""


class DigestMismatchError(ValueError):
    """The header digest does not match the embedded configuration."""


class ConfigParseError(ValueError):
    """The configuration document is not a JSON object."""


class ConfigValidationError(ValueError):
    """A configuration value violates its constraints."""


class UnknownConfigKeyError(ValueError):
    """The configuration names a key that does not exist."""
