"""Candidate filtering.

Two strategies: weak filtering for candidates a database links directly to
the arXiv id (titles and authors may legitimately change during
publication, so only identity checks apply), and strong filtering for
everything found by DOI lookup or title search (weak rules plus fuzzy
title and author comparison).

The fuzzy comparisons are ratio-based:

* titles: Levenshtein distance over normalized titles divided by the
  longer title's length, accepted strictly below ``title_ratio_max``;
* authors: diacritic-folded surnames matched exactly and greedily, the
  match count divided by the larger author-list size, accepted strictly
  above ``author_ratio_min``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .errors import DegenerateTitle
from .model import (
    FilterDecision,
    FilterMode,
    FilterOutcome,
    FilterRule,
    PersonName,
    PreprintRecord,
    PublicationCandidate,
    ResolutionReport,
    SourceDatabase,
    dedup_candidates,
    normalize_title,
    sort_candidates,
)

ARXIV_DOI_PREFIX = "10.48550/"


@dataclass(frozen=True)
class MatchThresholds:
    """Acceptance thresholds for strong filtering. The defaults are the
    method's published constants."""

    title_ratio_max: float = 0.05
    author_ratio_min: float = 0.70

    def __post_init__(self) -> None:
        for name in ("title_ratio_max", "author_ratio_min"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


class MatchDecision(NamedTuple):
    accepted: bool
    ratio: float


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions and
    substitutions transforming *a* into *b*, over Unicode scalar values.

    Two-row dynamic programming, O(len(a) * len(b)) time, O(min) space.
    """
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(b) > len(a):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        append = current.append
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def title_match(preprint_title: str, candidate_title: str, t: MatchThresholds) -> MatchDecision:
    """Compare two titles after normalization (lowercase, whitespace
    collapsed). Accepted iff distance / max(len) is strictly below the
    threshold; the measured ratio is returned for the trace."""
    a = normalize_title(preprint_title)
    b = normalize_title(candidate_title)
    if not a or not b:
        raise DegenerateTitle("cannot compare an empty title")
    if a == b:
        ratio = 0.0
    else:
        ratio = levenshtein(a, b) / max(len(a), len(b))
    return MatchDecision(accepted=ratio < t.title_ratio_max, ratio=ratio)


def author_match(
    preprint_authors: Sequence[PersonName],
    candidate_authors: Sequence[PersonName],
    t: MatchThresholds,
) -> MatchDecision:
    """Greedily match folded surnames exactly, each candidate surname used
    at most once. Accepted iff matched / max(list sizes) strictly exceeds
    the threshold. An empty candidate list scores 0."""
    pool = Counter(c.folded_surname for c in candidate_authors if c.folded_surname)
    matched = 0
    for person in preprint_authors:
        surname = person.folded_surname
        if surname and pool[surname] > 0:
            pool[surname] -= 1
            matched += 1
    denominator = max(len(preprint_authors), len(candidate_authors))
    ratio = matched / denominator if denominator else 0.0
    return MatchDecision(accepted=ratio > t.author_ratio_min, ratio=ratio)


def _venue_text(candidate: PublicationCandidate) -> str:
    return " ".join(part for part in (candidate.venue, candidate.journal) if part)


def _self_match_reason(candidate: PublicationCandidate) -> Optional[str]:
    venue = _venue_text(candidate).lower()
    # "CoRR" is DBLP's name for arXiv's computing repository
    if "arxiv" in venue or "corr" in venue.split():
        return f"venue/journal names arXiv ({_venue_text(candidate)!r})"
    if candidate.doi is not None and candidate.doi.value.lower().startswith(ARXIV_DOI_PREFIX):
        return f"arXiv-issued DOI {candidate.doi}"
    ids = candidate.external_ids
    if ids and candidate.doi is None:
        identity_schemes = {
            scheme for scheme in ids if scheme.lower() not in ("arxiv", "corpusid")
        }
        has_arxiv = any(scheme.lower() == "arxiv" for scheme in ids)
        if has_arxiv and not identity_schemes:
            return "only external identity is the arXiv id"
    return None


def _weak_rejection(
    preprint: PreprintRecord, candidate: PublicationCandidate
) -> Optional[tuple[FilterRule, str]]:
    """The three identity rules, in order: self-match, missing publication
    type and venue, DOI mismatch."""
    reason = _self_match_reason(candidate)
    if reason is not None:
        return FilterRule.SELF_MATCH, reason
    if not candidate.publication_types and not candidate.venue and not candidate.journal:
        return FilterRule.MISSING_TYPE_OR_VENUE, "no publication type and no venue/journal"
    if preprint.doi is not None and candidate.doi is not None and candidate.doi != preprint.doi:
        return FilterRule.DOI_MISMATCH, f"candidate DOI {candidate.doi} != preprint DOI {preprint.doi}"
    return None


def _decision(
    candidate: PublicationCandidate,
    index: int,
    outcome: FilterOutcome,
    rule: Optional[FilterRule],
    detail: str,
) -> FilterDecision:
    return FilterDecision(
        candidate_index=index,
        outcome=outcome,
        rule=rule,
        detail=f"{candidate.source.key}: {detail}",
    )


def weak_filter(
    preprint: PreprintRecord, candidates: Sequence[PublicationCandidate]
) -> tuple[list[PublicationCandidate], list[FilterDecision]]:
    accepted: list[PublicationCandidate] = []
    trace: list[FilterDecision] = []
    for index, candidate in enumerate(candidates):
        rejection = _weak_rejection(preprint, candidate)
        if rejection is not None:
            rule, detail = rejection
            trace.append(_decision(candidate, index, FilterOutcome.REJECTED, rule, detail))
        else:
            accepted.append(candidate)
            trace.append(
                _decision(candidate, index, FilterOutcome.ACCEPTED, None, "passed weak filtering")
            )
    return accepted, trace


def strong_filter(
    preprint: PreprintRecord,
    candidates: Sequence[PublicationCandidate],
    t: MatchThresholds,
) -> tuple[list[PublicationCandidate], list[FilterDecision]]:
    """Weak rules, then title comparison, then author comparison, stopping
    at the first rejection. Acceptances record both measured ratios."""
    accepted: list[PublicationCandidate] = []
    trace: list[FilterDecision] = []
    for index, candidate in enumerate(candidates):
        rejection = _weak_rejection(preprint, candidate)
        if rejection is not None:
            rule, detail = rejection
            trace.append(_decision(candidate, index, FilterOutcome.REJECTED, rule, detail))
            continue
        try:
            title = title_match(preprint.title, candidate.title, t)
        except DegenerateTitle:
            trace.append(
                _decision(
                    candidate, index, FilterOutcome.REJECTED, FilterRule.TITLE_DISTANCE,
                    "title empty after normalization",
                )
            )
            continue
        if not title.accepted:
            trace.append(
                _decision(
                    candidate, index, FilterOutcome.REJECTED, FilterRule.TITLE_DISTANCE,
                    f"title_ratio={title.ratio:.4f} not < {t.title_ratio_max}",
                )
            )
            continue
        authors = author_match(preprint.authors, candidate.authors, t)
        if not authors.accepted:
            trace.append(
                _decision(
                    candidate, index, FilterOutcome.REJECTED, FilterRule.AUTHOR_RATIO,
                    f"author_ratio={authors.ratio:.4f} not > {t.author_ratio_min}",
                )
            )
            continue
        accepted.append(candidate)
        trace.append(
            _decision(
                candidate, index, FilterOutcome.ACCEPTED, None,
                f"title_ratio={title.ratio:.4f}, author_ratio={authors.ratio:.4f}",
            )
        )
    return accepted, trace


def resolve(
    preprint: PreprintRecord,
    provider_results: Sequence,
    t: Optional[MatchThresholds] = None,
) -> ResolutionReport:
    """Filter each database's candidate set with the mode its provider
    declared and assemble the report. ``provider_results`` must hold
    exactly one result per database, in enum order."""
    thresholds = t or MatchThresholds()
    expected = list(SourceDatabase)
    if [r.source for r in provider_results] != expected:
        raise ValueError("expected exactly one result per database, in enum order")
    per_database: dict[SourceDatabase, list[PublicationCandidate]] = {}
    trace: list[FilterDecision] = []
    for result in provider_results:
        if result.filter_mode is FilterMode.WEAK:
            accepted, decisions = weak_filter(preprint, result.candidates)
        else:
            accepted, decisions = strong_filter(preprint, result.candidates, thresholds)
        per_database[result.source] = sort_candidates(dedup_candidates(accepted))
        trace.extend(decisions)
    return ResolutionReport.build(preprint, per_database, trace)
