"""Exception types shared across the engine."""


class IralError(Exception):
    """Base class for all errors raised by this package."""


class EmptyQuery(IralError):
    """Query is blank (or reduces to nothing) after trimming."""


class MalformedResponse(IralError):
    """Provider response body is not JSON or has a broken result list."""


class QuotaExceeded(IralError):
    """Provider hit its daily request limit."""


class ProviderUnavailable(IralError):
    """Transport failure or non-2xx status from one provider."""


class AllProvidersFailed(IralError):
    """Every configured provider failed; the search cannot proceed."""


class InvalidUrl(IralError):
    """URL is not an absolute http/https URL."""


class UndecodableContent(IralError):
    """Page bytes could not be decoded with any declared or fallback charset."""


class ZeroWeights(IralError):
    """All ranking weights are zero; scores would be undefined."""


class PageOutOfRange(IralError):
    """Requested result page is outside the 1..5 window."""


class EmptyRun(IralError):
    """A judged run has no evaluated documents."""


class AllZero(IralError):
    """Relative recall asked for with all engine counts zero."""


class TooFewRows(IralError):
    """Parameter importance needs at least three table rows."""
