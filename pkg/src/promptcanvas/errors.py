"""Exception hierarchy shared across the package."""


class PromptcanvasError(Exception):
    """Base class for all package errors."""


class ContractViolation(PromptcanvasError):
    """A caller broke a documented precondition (programming error)."""


class DimensionMismatchError(ContractViolation):
    """Vectors of different dimensions were mixed."""


class InputError(PromptcanvasError):
    """User-supplied input was unusable (empty text, undecodable image...)."""


class ZeroVectorError(InputError):
    """Cosine similarity is undefined for the zero vector."""


class ProviderError(PromptcanvasError):
    """A remote or fixture provider failed."""

    def __init__(self, message: str, retries: int = 0):
        super().__init__(message)
        self.retries = retries


class FixtureMissError(ProviderError):
    """A transcript fixture was queried with an unrecorded request."""


class SuggestionError(PromptcanvasError):
    """The chat provider returned output that could not be parsed, even
    after one re-ask. Carries the raw response for inspection."""

    def __init__(self, message: str, raw_response: str = ""):
        super().__init__(message)
        self.raw_response = raw_response


class IntegrationError(PromptcanvasError):
    """Modifier integration failed; callers may fall back to comma-append."""


class GenerationError(PromptcanvasError):
    """The image backend was unreachable or rejected the batch."""


class FormatError(PromptcanvasError):
    """A persisted file is truncated, malformed, or schema-incompatible."""


class SessionLookupError(PromptcanvasError):
    """An unknown session, prompt, or image id was referenced."""
