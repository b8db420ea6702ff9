"""Exception hierarchy shared across the package."""


class MultidealError(Exception):
    """Base class for all package errors."""


class ContractError(MultidealError):
    """A caller violated a documented precondition."""


class MalformedUtilityError(MultidealError):
    """A utility function is incomplete or out of range."""


class CapacityError(MultidealError):
    """An enumeration would exceed the configured outcome-count cap."""


class IllegalActionError(MultidealError):
    """An action is not legal in the current protocol state."""


class ScenarioParseError(MultidealError):
    """A scenario file is malformed.

    ``location`` names the offending field or byte position.
    """

    def __init__(self, message: str, location: str = ""):
        super().__init__(message if not location else f"{message} (at {location})")
        self.location = location


class SchemaVersionError(ScenarioParseError):
    """A scenario file declares an unsupported schema version."""


class TournamentConfigError(MultidealError):
    """A tournament configuration is invalid."""
