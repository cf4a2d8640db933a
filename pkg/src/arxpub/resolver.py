"""End-to-end pipeline: normalize the input, fetch the preprint from
arXiv, fan out to the literature databases, filter, and serialize.

The CLI's ``--json`` output and the HTTP service body are both produced
by :meth:`ResolveOutcome.to_response_dict`, which keeps the two
structurally identical by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arxiv import ArxivClient
from .bibtex import CiteKeyAllocator, render_candidate, render_preprint
from .config import ResolverConfig
from .idnorm import normalize_arxiv_input
from .matching import resolve
from .model import ArxivId, PreprintRecord, ResolutionReport, SourceDatabase
from .providers import CandidateQuery, ProviderResult, make_providers, query_all_timed
from .transport import Transport, make_transport


@dataclass(frozen=True)
class ResolveOutcome:
    report: ResolutionReport
    provider_results: tuple[ProviderResult, ...]
    timings_ms: dict[SourceDatabase, float]

    @property
    def preprint(self) -> PreprintRecord:
        return self.report.preprint

    def to_response_dict(self, tex_escape: bool = False) -> dict:
        keys = CiteKeyAllocator()
        preprint_entry = render_preprint(self.preprint, keys=keys, tex_escape=tex_escape)
        candidates = {}
        for db in SourceDatabase:
            rendered = []
            for candidate in self.report.per_database.get(db, ()):
                entry = render_candidate(candidate, keys=keys, tex_escape=tex_escape)
                payload = candidate.to_dict()
                payload["bibtex"] = entry.render()
                rendered.append(payload)
            candidates[db.key] = rendered
        provider_errors = {
            result.source.key: list(result.errors_encountered)
            for result in self.provider_results
        }
        return {
            "preprint": self.preprint.to_dict(),
            "preprint_bibtex": preprint_entry.render(),
            "candidates": candidates,
            "trace": [decision.to_dict() for decision in self.report.trace],
            "resolved": self.report.resolved,
            "timing": {db.key: round(self.timings_ms.get(db, 0.0), 3) for db in SourceDatabase},
            "provider_errors": provider_errors,
        }


class Resolver:
    """One configured pipeline instance; safe to share across threads."""

    def __init__(self, config: Optional[ResolverConfig] = None, transport: Optional[Transport] = None) -> None:
        self.config = config or ResolverConfig()
        self.transport = transport or make_transport(self.config)
        self.arxiv = ArxivClient(self.transport, self.config.arxiv_base_url)
        self.providers = make_providers(self.transport, self.config)

    def resolve_input(self, raw: str) -> ResolveOutcome:
        """Full pipeline from raw user text. Raises InputError subclasses
        for unusable input and arXiv client errors for fetch failures;
        database failures degrade to per-provider error strings."""
        return self.resolve_id(normalize_arxiv_input(raw))

    def resolve_id(self, arxiv_id: ArxivId) -> ResolveOutcome:
        preprint = self.arxiv.fetch_preprint(arxiv_id)
        query = CandidateQuery(arxiv_id=arxiv_id, title=preprint.title, doi=preprint.doi)
        results, timings = query_all_timed(
            query, self.providers, budget=self.config.resolution_budget
        )
        report = resolve(preprint, results, self.config.thresholds)
        return ResolveOutcome(
            report=report, provider_results=tuple(results), timings_ms=timings
        )
