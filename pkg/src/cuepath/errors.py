"""Exception taxonomy shared across the simulation, pipeline, store and service."""


class CuepathError(Exception):
    """Base class for all package errors."""


# -- physics ---------------------------------------------------------------

class ConfigurationError(CuepathError):
    """Table or rule configuration violates an invariant."""


class ShotWhileMovingError(CuepathError):
    """A shot was attempted while balls were still in motion."""


class SimulationOverflowError(CuepathError):
    """simulate_until_rest hit the simulated-time guard; config is bad."""


# -- career state machine --------------------------------------------------

class ValidationError(CuepathError):
    """User-supplied data (profile, shot vector) failed validation."""


class IllegalStateError(CuepathError):
    """Operation not permitted in the session's current status."""


class ConsistencyError(CuepathError):
    """Internal reference (event id, ball id) does not resolve."""


class NotVisibleError(CuepathError):
    """Hint requested for a ball that is no longer on the table."""


# -- generation pipeline ---------------------------------------------------

class GrammarError(CuepathError):
    """Event string does not match the title/body/label grammar."""


class MissingLabelError(GrammarError):
    """A random event string lacks its trailing bracketed label."""


class UnknownLabelError(GrammarError):
    """Bracketed label is not Positive/Neutral/Negative/Change."""


class DecodeError(CuepathError):
    """Provider payload could not be decoded as a JSON object."""


class SchemaError(CuepathError):
    """Decoded payload is missing required keys or has extras."""


class CategoryError(CuepathError):
    """Event of the wrong category passed to a category-specific op."""


class TransportError(CuepathError):
    """Provider request failed at the transport level (timeout, HTTP)."""


class GenerationError(CuepathError):
    """Generation failed after exhausting the retry budget."""


# -- store -----------------------------------------------------------------

class StorageError(CuepathError):
    """Base for persistence failures."""


class NotFoundError(StorageError):
    """No stored session under the given id."""


class ConcurrencyError(StorageError):
    """Journal sequence conflict (duplicate or gapped seq)."""


class CorruptionError(StorageError):
    """Stored journal/snapshot is damaged or internally inconsistent."""


class ReplayError(StorageError):
    """Journal does not fold into a valid session."""

    def __init__(self, message: str, seq: int | None = None):
        super().__init__(message if seq is None else f"seq {seq}: {message}")
        self.seq = seq
