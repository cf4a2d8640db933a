"""Exception types shared across the package."""


class ResolverError(Exception):
    """Base class for every error this package raises on purpose."""


class InputError(ResolverError):
    """The user-supplied text cannot be turned into an arXiv id."""


class EmptyInput(InputError):
    """Input is empty after trimming whitespace."""


class EmptyAfterStripping(InputError):
    """Prefix and suffix stripping consumed the whole input."""


class InvalidId(InputError):
    """The normalized remainder does not look like an arXiv id at all."""


class NetworkError(ResolverError):
    """Transport-level failure, after retries were exhausted."""


class FixtureMissing(NetworkError):
    """Replay mode has no recorded response for a request."""


class RateLimited(ResolverError):
    """An upstream API answered 429."""


class NotFound(ResolverError):
    """The arXiv API has no entry for the requested id."""


class ParseError(ResolverError):
    """A response body could not be parsed."""


class DegenerateTitle(ResolverError):
    """A title is empty after normalization and cannot be compared."""


class MissingCoreFields(ResolverError):
    """A record lacks the fields required to render a citation."""


class MalformedRecord(ResolverError):
    """A metadata snapshot line could not be decoded."""


class PopulationTooSmall(ResolverError):
    """The eligible population is smaller than the requested sample size."""
