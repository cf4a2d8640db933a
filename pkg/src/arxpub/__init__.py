"""arxpub: find the peer-reviewed published version of an arXiv preprint.

The pipeline normalizes a user-supplied id or URL, pulls the preprint's
metadata from the arXiv API, queries DBLP, CrossRef/CrossCite,
SemanticScholar and OpenAlex for candidate publications, filters the
candidates (identity rules plus fuzzy title/author matching), and renders
the survivors as BibTeX.
"""

from .config import ResolverConfig, __version__, load_config
from .errors import (
    DegenerateTitle,
    EmptyAfterStripping,
    EmptyInput,
    FixtureMissing,
    InputError,
    InvalidId,
    MalformedRecord,
    MissingCoreFields,
    NetworkError,
    NotFound,
    ParseError,
    PopulationTooSmall,
    RateLimited,
    ResolverError,
)
from .idnorm import normalize_arxiv_input
from .matching import (
    MatchThresholds,
    author_match,
    levenshtein,
    resolve,
    strong_filter,
    title_match,
    weak_filter,
)
from .model import (
    ArxivId,
    DiscoveryKind,
    DiscoveryPath,
    Doi,
    FilterDecision,
    FilterMode,
    FilterOutcome,
    FilterRule,
    PersonName,
    PreprintRecord,
    PublicationCandidate,
    ResolutionReport,
    SourceDatabase,
    is_resolved,
)
from .providers import CandidateQuery, ProviderResult, query_all
from .resolver import ResolveOutcome, Resolver

__all__ = [
    "ArxivId",
    "CandidateQuery",
    "DegenerateTitle",
    "DiscoveryKind",
    "DiscoveryPath",
    "Doi",
    "EmptyAfterStripping",
    "EmptyInput",
    "FilterDecision",
    "FilterMode",
    "FilterOutcome",
    "FilterRule",
    "FixtureMissing",
    "InputError",
    "InvalidId",
    "MalformedRecord",
    "MatchThresholds",
    "MissingCoreFields",
    "NetworkError",
    "NotFound",
    "ParseError",
    "PersonName",
    "PopulationTooSmall",
    "PreprintRecord",
    "ProviderResult",
    "PublicationCandidate",
    "RateLimited",
    "ResolutionReport",
    "ResolveOutcome",
    "Resolver",
    "ResolverConfig",
    "ResolverError",
    "SourceDatabase",
    "__version__",
    "author_match",
    "is_resolved",
    "levenshtein",
    "load_config",
    "normalize_arxiv_input",
    "query_all",
    "resolve",
    "strong_filter",
    "title_match",
    "weak_filter",
]
