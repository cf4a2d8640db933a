"""Domain types shared by every stage of the resolution pipeline.

Everything here is immutable after construction and safe to share between
threads. Construction validates the invariants the rest of the code relies
on (non-empty author lists, closed enumerations, DOI shape).
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Any, Mapping, Optional, Sequence

RAW_PAYLOAD_CAP = 16 * 1024  # bytes of audit payload kept per candidate

# Characters that survive canonical decomposition unchanged but are plain
# ASCII letters for surname-matching purposes.
_FOLD_TABLE = str.maketrans(
    {
        "ø": "o",
        "ß": "ss",
        "æ": "ae",
        "œ": "oe",
        "ł": "l",
        "đ": "d",
        "ð": "d",
        "þ": "th",
        "ı": "i",
    }
)

_NAME_SUFFIXES = {"jr", "jr.", "sr", "sr.", "ii", "iii", "iv"}


def fold_text(text: str) -> str:
    """Lowercase *text* and strip diacritics (combining marks plus a small
    table of letters that do not decompose, e.g. "ø" and "ß")."""
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return stripped.lower().translate(_FOLD_TABLE)


def collapse_whitespace(text: str) -> str:
    """Collapse runs of whitespace (including newlines) to single spaces."""
    return " ".join(text.split())


def normalize_title(title: str) -> str:
    """Canonical form used for title comparison: trimmed, whitespace
    collapsed, lowercased."""
    return collapse_whitespace(title).lower()


def extract_surname(full: str) -> str:
    """Family name from a free-form person name.

    Comma form ("Lee, Ann") is surname-first; otherwise the last
    whitespace-separated token wins, after dropping trailing generational
    suffixes ("Jr.", "III").
    """
    name = full.strip()
    if not name:
        return ""
    if "," in name:
        head = name.split(",", 1)[0].strip()
        if head:
            return head
    tokens = name.split()
    while len(tokens) > 1 and tokens[-1].lower() in _NAME_SUFFIXES:
        tokens.pop()
    return tokens[-1] if tokens else ""


@dataclass(frozen=True)
class PersonName:
    full: str
    surname: str
    folded_surname: str

    @classmethod
    def from_full(cls, full: str) -> "PersonName":
        surname = extract_surname(full)
        return cls(full=collapse_whitespace(full), surname=surname, folded_surname=fold_text(surname))

    @classmethod
    def from_parts(cls, given: str, family: str) -> "PersonName":
        family = family.strip()
        full = collapse_whitespace(f"{given.strip()} {family}".strip())
        return cls(full=full, surname=family, folded_surname=fold_text(family))

    def to_dict(self) -> dict:
        return {"full": self.full, "surname": self.surname, "folded_surname": self.folded_surname}


@dataclass(frozen=True, eq=False)
class Doi:
    """A DOI handle, canonical "10.x/..." form. Comparison is
    case-insensitive, matching registry semantics."""

    value: str

    def __post_init__(self) -> None:
        if not (self.value.startswith("10.") and "/" in self.value):
            raise ValueError(f"not a DOI: {self.value!r}")

    _PREFIXES = (
        "https://doi.org/",
        "http://doi.org/",
        "https://dx.doi.org/",
        "http://dx.doi.org/",
        "doi:",
    )

    @classmethod
    def parse(cls, raw: Optional[str]) -> Optional["Doi"]:
        """Best-effort DOI extraction; returns None for anything that does
        not reduce to a handle."""
        if not raw or not isinstance(raw, str):
            return None
        value = raw.strip()
        changed = True
        while changed:
            changed = False
            lowered = value.lower()
            for prefix in cls._PREFIXES:
                if lowered.startswith(prefix):
                    value = value[len(prefix):].strip()
                    changed = True
                    break
        if value.startswith("10.") and "/" in value:
            return cls(value)
        return None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Doi):
            return self.value.lower() == other.value.lower()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value.lower())

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ArxivId:
    """Normalized arXiv identifier. ``normalized`` is lowercase, carries no
    "arxiv:"/"abs/"/"pdf/" prefix and no ".pdf" or version suffix; a
    trailing "vN" from the input is kept in ``version``."""

    raw: str
    normalized: str
    version: Optional[int] = None

    def to_dict(self) -> dict:
        return {"raw": self.raw, "normalized": self.normalized, "version": self.version}


class SourceDatabase(Enum):
    """The four literature databases, in reporting order."""

    DBLP = "dblp"
    CROSSREF_CROSSCITE = "crossref_crosscite"
    SEMANTIC_SCHOLAR = "semantic_scholar"
    OPENALEX = "openalex"

    @property
    def key(self) -> str:
        return self.value

    @property
    def label(self) -> str:
        return _DB_LABELS[self]

    @property
    def bit(self) -> int:
        return 1 << list(SourceDatabase).index(self)


_DB_LABELS = {
    SourceDatabase.DBLP: "DBLP",
    SourceDatabase.CROSSREF_CROSSCITE: "CrossRef/CrossCite",
    SourceDatabase.SEMANTIC_SCHOLAR: "SemanticScholar",
    SourceDatabase.OPENALEX: "OpenAlex",
}


class DiscoveryKind(Enum):
    DIRECT_ARXIV_ID = "DIRECT_ARXIV_ID"
    DIRECT_DOI = "DIRECT_DOI"
    TITLE_SEARCH = "TITLE_SEARCH"


@dataclass(frozen=True)
class DiscoveryPath:
    """How a candidate was found; the kind decides weak vs. strong
    filtering, the step records which query level produced the hit."""

    kind: DiscoveryKind
    cascade_step: int

    def __post_init__(self) -> None:
        if self.cascade_step < 1:
            raise ValueError("cascade_step must be positive")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "cascade_step": self.cascade_step}


class FilterMode(Enum):
    WEAK = "WEAK"
    STRONG = "STRONG"


@dataclass(frozen=True)
class PreprintRecord:
    """Metadata extracted from the arXiv API for one preprint."""

    id: ArxivId
    latest_version: int
    title: str
    authors: tuple[PersonName, ...]
    doi: Optional[Doi]
    published_date: date
    updated_date: date
    primary_category: str
    categories: tuple[str, ...]
    comment: Optional[str] = None
    journal_ref: Optional[str] = None
    abstract: str = ""

    def __post_init__(self) -> None:
        if not self.authors:
            raise ValueError("a preprint has at least one author")
        if self.latest_version < 1:
            raise ValueError("latest_version must be >= 1")
        if self.primary_category and self.primary_category not in self.categories:
            object.__setattr__(self, "categories", (self.primary_category,) + self.categories)

    def to_dict(self) -> dict:
        return {
            "id": self.id.to_dict(),
            "latest_version": self.latest_version,
            "title": self.title,
            "authors": [a.to_dict() for a in self.authors],
            "doi": str(self.doi) if self.doi else None,
            "published_date": self.published_date.isoformat(),
            "updated_date": self.updated_date.isoformat(),
            "primary_category": self.primary_category,
            "categories": list(self.categories),
            "comment": self.comment,
            "journal_ref": self.journal_ref,
            "abstract": self.abstract,
        }


@dataclass(frozen=True)
class PublicationCandidate:
    """One database hit, annotated with where and how it was found."""

    source: SourceDatabase
    discovery: DiscoveryPath
    title: str
    authors: tuple[PersonName, ...]
    doi: Optional[Doi] = None
    venue: Optional[str] = None
    journal: Optional[str] = None
    year: Optional[int] = None
    publication_types: tuple[str, ...] = ()
    external_ids: Mapping[str, str] = field(default_factory=dict)
    is_open_access: Optional[bool] = None
    citation_count: Optional[int] = None
    raw_payload: str = ""

    def __post_init__(self) -> None:
        if self.citation_count is not None and self.citation_count < 0:
            raise ValueError("citation_count cannot be negative")
        payload = self.raw_payload
        if len(payload.encode("utf-8", errors="replace")) > RAW_PAYLOAD_CAP:
            encoded = payload.encode("utf-8", errors="replace")[:RAW_PAYLOAD_CAP]
            object.__setattr__(self, "raw_payload", encoded.decode("utf-8", errors="ignore"))
        object.__setattr__(self, "external_ids", dict(self.external_ids))

    def to_dict(self) -> dict:
        return {
            "source": self.source.key,
            "discovery": self.discovery.to_dict(),
            "title": self.title,
            "authors": [a.to_dict() for a in self.authors],
            "doi": str(self.doi) if self.doi else None,
            "venue": self.venue,
            "journal": self.journal,
            "year": self.year,
            "publication_types": list(self.publication_types),
            "external_ids": dict(self.external_ids),
            "is_open_access": self.is_open_access,
            "citation_count": self.citation_count,
            "raw_payload": self.raw_payload,
        }


class FilterOutcome(Enum):
    ACCEPTED = "ACCEPTED"
    REJECTED = "REJECTED"


class FilterRule(Enum):
    SELF_MATCH = "SELF_MATCH"
    MISSING_TYPE_OR_VENUE = "MISSING_TYPE_OR_VENUE"
    DOI_MISMATCH = "DOI_MISMATCH"
    TITLE_DISTANCE = "TITLE_DISTANCE"
    AUTHOR_RATIO = "AUTHOR_RATIO"


@dataclass(frozen=True)
class FilterDecision:
    """One row of the filter trace: what happened to candidate N and why."""

    candidate_index: int
    outcome: FilterOutcome
    rule: Optional[FilterRule]
    detail: str

    def __post_init__(self) -> None:
        if self.outcome is FilterOutcome.REJECTED and self.rule is None:
            raise ValueError("a rejection names exactly one rule")
        if self.outcome is FilterOutcome.ACCEPTED and self.rule is not None:
            raise ValueError("an acceptance carries no rejection rule")

    def to_dict(self) -> dict:
        return {
            "candidate_index": self.candidate_index,
            "outcome": self.outcome.value,
            "rule": self.rule.value if self.rule else None,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ResolutionReport:
    """Surviving candidates per database plus the trace explaining every
    exclusion. ``resolved`` is true iff any database contributed."""

    preprint: PreprintRecord
    per_database: Mapping[SourceDatabase, tuple[PublicationCandidate, ...]]
    trace: tuple[FilterDecision, ...]
    resolved: bool

    @classmethod
    def build(
        cls,
        preprint: PreprintRecord,
        per_database: Mapping[SourceDatabase, Sequence[PublicationCandidate]],
        trace: Sequence[FilterDecision],
    ) -> "ResolutionReport":
        table = {db: tuple(per_database.get(db, ())) for db in SourceDatabase}
        return cls(
            preprint=preprint,
            per_database=table,
            trace=tuple(trace),
            resolved=any(table.values()),
        )

    def accepted(self) -> list[PublicationCandidate]:
        out: list[PublicationCandidate] = []
        for db in SourceDatabase:
            out.extend(self.per_database.get(db, ()))
        return out


def is_resolved(report: ResolutionReport) -> bool:
    """True iff at least one database contributed an accepted candidate."""
    return any(report.per_database.get(db) for db in SourceDatabase)


def dedup_candidates(candidates: Sequence[PublicationCandidate]) -> list[PublicationCandidate]:
    """Drop duplicates within one database's accepted list.

    Identity is the DOI (case-insensitive) when present, else the pair
    (folded title, year). First occurrence wins, keeping cascade order.
    """
    seen: set[Any] = set()
    kept: list[PublicationCandidate] = []
    for cand in candidates:
        key: Any
        if cand.doi is not None:
            key = ("doi", cand.doi.value.lower())
        else:
            key = ("title", fold_text(normalize_title(cand.title)), cand.year)
        if key in seen:
            continue
        seen.add(key)
        kept.append(cand)
    return kept


def sort_candidates(candidates: Sequence[PublicationCandidate]) -> list[PublicationCandidate]:
    """Display order within one database: best-cited first, unknown counts
    last, ties broken by title."""
    return sorted(
        candidates,
        key=lambda c: (-(c.citation_count if c.citation_count is not None else -1), normalize_title(c.title)),
    )


def candidate_raw_payload(payload: Any) -> str:
    """Verbatim response fragment for audit, serialized and capped."""
    if isinstance(payload, str):
        return payload
    try:
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)
    except (TypeError, ValueError):
        return repr(payload)
