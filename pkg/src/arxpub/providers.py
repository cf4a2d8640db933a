"""Clients for the four literature databases.

Each provider runs its database's query cascade: ordered steps that stop
as soon as one step yields at least one parseable hit (a hit with an
empty title does not count). A provider never raises out of ``query``;
failures become error strings on the result so one broken database cannot
abort a resolution.
"""

from __future__ import annotations

import json
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeoutError
from dataclasses import dataclass
from typing import Any, Optional, Sequence
from urllib.parse import quote, urlencode

from .config import ResolverConfig
from .errors import NetworkError, RateLimited, ResolverError
from .model import (
    ArxivId,
    Doi,
    DiscoveryKind,
    DiscoveryPath,
    FilterMode,
    PersonName,
    PublicationCandidate,
    SourceDatabase,
    candidate_raw_payload,
    normalize_title,
)
from .transport import HttpResponse, Transport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateQuery:
    """What the databases are asked about: the preprint's id, title and,
    when arXiv knows it, DOI."""

    arxiv_id: ArxivId
    title: str
    doi: Optional[Doi] = None

    def __post_init__(self) -> None:
        if not self.title.strip():
            raise ValueError("query title must be non-empty")


@dataclass(frozen=True)
class ProviderResult:
    source: SourceDatabase
    candidates: tuple[PublicationCandidate, ...]
    filter_mode: FilterMode
    errors_encountered: tuple[str, ...] = ()

    @classmethod
    def build(
        cls,
        source: SourceDatabase,
        candidates: Sequence[PublicationCandidate] = (),
        errors: Sequence[str] = (),
    ) -> "ProviderResult":
        candidates = tuple(candidates)
        weak = bool(candidates) and all(
            c.discovery.kind is DiscoveryKind.DIRECT_ARXIV_ID for c in candidates
        )
        return cls(
            source=source,
            candidates=candidates,
            filter_mode=FilterMode.WEAK if weak else FilterMode.STRONG,
            errors_encountered=tuple(errors),
        )


class Provider:
    """Shared harness: error capture, polite GET helper, JSON decoding."""

    database: SourceDatabase

    def __init__(self, transport: Transport, config: ResolverConfig) -> None:
        self.transport = transport
        self.config = config

    def query(self, q: CandidateQuery) -> ProviderResult:
        errors: list[str] = []
        try:
            candidates = self._cascade(q, errors)
        except ResolverError as exc:  # safety net; steps normally capture
            errors.append(f"{type(exc).__name__}: {exc}")
            candidates = []
        return ProviderResult.build(self.database, candidates, errors)

    def _cascade(self, q: CandidateQuery, errors: list[str]) -> list[PublicationCandidate]:
        raise NotImplementedError

    def _step_get(
        self, url: str, errors: list[str], headers: Optional[dict] = None
    ) -> Optional[HttpResponse]:
        """GET one cascade step. Returns None (and possibly records an
        error) when the step produced nothing usable; 404 is a plain miss."""
        try:
            response = self.transport.get(url, headers=headers)
        except (NetworkError, RateLimited) as exc:
            errors.append(f"{type(exc).__name__}: {exc}")
            return None
        if response.status == 404:
            return None
        if not response.ok:
            errors.append(f"HTTP {response.status} from {url}")
            return None
        return response

    def _decode_json(self, response: HttpResponse, errors: list[str]) -> Optional[Any]:
        try:
            return json.loads(response.body)
        except ValueError as exc:
            errors.append(f"ParseError: invalid JSON from {response.url}: {exc}")
            return None

    def _user_agent_headers(self) -> dict:
        return {"User-Agent": self.config.full_user_agent()}


def _as_list(value: Any) -> list:
    if value is None:
        return []
    if isinstance(value, list):
        return value
    return [value]


def _first_string(value: Any) -> Optional[str]:
    for item in _as_list(value):
        if isinstance(item, str) and item.strip():
            return item.strip()
    return None


def _int_or_none(value: Any) -> Optional[int]:
    try:
        if value is None or isinstance(value, bool):
            return None
        return int(value)
    except (TypeError, ValueError):
        return None


def _csl_authors(raw: Any) -> tuple[PersonName, ...]:
    people: list[PersonName] = []
    for item in _as_list(raw):
        if not isinstance(item, dict):
            continue
        family = item.get("family")
        if isinstance(family, str) and family.strip():
            people.append(PersonName.from_parts(str(item.get("given") or ""), family))
            continue
        literal = item.get("literal") or item.get("name")
        if isinstance(literal, str) and literal.strip():
            people.append(PersonName.from_full(literal))
    return tuple(people)


def _issued_year(message: dict) -> Optional[int]:
    issued = message.get("issued") or message.get("published") or {}
    parts = issued.get("date-parts") if isinstance(issued, dict) else None
    if isinstance(parts, list) and parts and isinstance(parts[0], list) and parts[0]:
        return _int_or_none(parts[0][0])
    return None


def _split_container(message: dict, work_type: str) -> tuple[Optional[str], Optional[str]]:
    """(venue, journal) from a CSL/CrossRef container title, split on the
    work type: journal-ish types fill journal, the rest fill venue."""
    container = _first_string(message.get("container-title"))
    if container is None:
        return None, None
    if "journal" in work_type:
        return None, container
    return container, None


class DblpProvider(Provider):
    """DBLP publication search, top five hits by relevance."""

    database = SourceDatabase.DBLP

    def search_url(self, title: str) -> str:
        query = urlencode({"q": title, "format": "json", "h": 5})
        return f"{self.config.dblp_base_url}?{query}"

    def _cascade(self, q: CandidateQuery, errors: list[str]) -> list[PublicationCandidate]:
        response = self._step_get(self.search_url(q.title), errors)
        if response is None:
            return []
        data = self._decode_json(response, errors)
        if data is None:
            return []
        try:
            hits = _as_list((data.get("result") or {}).get("hits", {}).get("hit"))
        except AttributeError:
            errors.append(f"ParseError: unexpected DBLP payload shape from {response.url}")
            return []
        candidates = []
        for hit in hits:
            candidate = self._parse_hit(hit)
            if candidate is not None:
                candidates.append(candidate)
        return candidates

    def _parse_hit(self, hit: Any) -> Optional[PublicationCandidate]:
        if not isinstance(hit, dict):
            return None
        info = hit.get("info") or {}
        title = _first_string(info.get("title"))
        if not title or not normalize_title(title):
            return None
        authors_raw = (info.get("authors") or {}).get("author")
        authors = []
        for author in _as_list(authors_raw):
            if isinstance(author, dict):
                name = author.get("text")
            else:
                name = author
            if isinstance(name, str) and name.strip():
                authors.append(PersonName.from_full(name))
        venue = _first_string(info.get("venue"))
        pub_type = info.get("type")
        external: dict[str, str] = {}
        if isinstance(info.get("key"), str):
            external["DBLP"] = info["key"]
        doi = Doi.parse(info.get("doi"))
        if doi is not None:
            external["DOI"] = doi.value
        return PublicationCandidate(
            source=self.database,
            discovery=DiscoveryPath(DiscoveryKind.TITLE_SEARCH, cascade_step=1),
            title=title,
            authors=tuple(authors),
            doi=doi,
            venue=venue,
            journal=None,
            year=_int_or_none(info.get("year")),
            publication_types=(pub_type,) if isinstance(pub_type, str) and pub_type else (),
            external_ids=external,
            is_open_access=(info.get("access") == "open") if "access" in info else None,
            citation_count=None,
            raw_payload=candidate_raw_payload(hit),
        )


class CrossrefCrossciteProvider(Provider):
    """Two-level cascade: DOI content negotiation first, then a CrossRef
    bibliographic search (top 10 by score)."""

    database = SourceDatabase.CROSSREF_CROSSCITE

    CSL_JSON = "application/vnd.citationstyles.csl+json"

    def doi_url(self, doi: Doi) -> str:
        return f"{self.config.crosscite_base_url}/{quote(doi.value, safe='/')}"

    def search_url(self, title: str) -> str:
        query = urlencode(
            {"query.bibliographic": title, "sort": "score", "rows": 10}, quote_via=quote
        )
        return f"{self.config.crossref_base_url}?{query}"

    def _cascade(self, q: CandidateQuery, errors: list[str]) -> list[PublicationCandidate]:
        if q.doi is not None:
            headers = self._user_agent_headers()
            headers["Accept"] = self.CSL_JSON
            response = self._step_get(self.doi_url(q.doi), errors, headers=headers)
            if response is not None:
                message = self._decode_json(response, errors)
                if isinstance(message, dict):
                    candidate = self._parse_csl(message, step=1)
                    if candidate is not None:
                        return [candidate]
        response = self._step_get(self.search_url(q.title), errors, headers=self._user_agent_headers())
        if response is None:
            return []
        data = self._decode_json(response, errors)
        if not isinstance(data, dict):
            return []
        items = _as_list((data.get("message") or {}).get("items"))
        candidates = []
        for item in items:
            if isinstance(item, dict):
                candidate = self._parse_work(item)
                if candidate is not None:
                    candidates.append(candidate)
        return candidates

    def _parse_csl(self, message: dict, step: int) -> Optional[PublicationCandidate]:
        title = _first_string(message.get("title"))
        if not title or not normalize_title(title):
            return None
        work_type = str(message.get("type") or "")
        venue, journal = _split_container(message, work_type)
        # CSL "article-journal" marks journals; map its container accordingly
        if work_type == "article-journal" and venue and not journal:
            venue, journal = None, venue
        doi = Doi.parse(message.get("DOI"))
        return PublicationCandidate(
            source=self.database,
            discovery=DiscoveryPath(DiscoveryKind.DIRECT_DOI, cascade_step=step),
            title=title,
            authors=_csl_authors(message.get("author")),
            doi=doi,
            venue=venue,
            journal=journal,
            year=_issued_year(message),
            publication_types=(work_type,) if work_type else (),
            external_ids={"DOI": doi.value} if doi else {},
            is_open_access=None,
            citation_count=_int_or_none(message.get("is-referenced-by-count")),
            raw_payload=candidate_raw_payload(message),
        )

    def _parse_work(self, item: dict) -> Optional[PublicationCandidate]:
        title = _first_string(item.get("title"))
        if not title or not normalize_title(title):
            return None
        work_type = str(item.get("type") or "")
        venue, journal = _split_container(item, work_type)
        doi = Doi.parse(item.get("DOI"))
        return PublicationCandidate(
            source=self.database,
            discovery=DiscoveryPath(DiscoveryKind.TITLE_SEARCH, cascade_step=2),
            title=title,
            authors=_csl_authors(item.get("author")),
            doi=doi,
            venue=venue,
            journal=journal,
            year=_issued_year(item),
            publication_types=(work_type,) if work_type else (),
            external_ids={"DOI": doi.value} if doi else {},
            is_open_access=None,
            citation_count=_int_or_none(item.get("is-referenced-by-count")),
            raw_payload=candidate_raw_payload(item),
        )


class SemanticScholarProvider(Provider):
    """Three-level cascade: direct arXiv-id lookup, DOI lookup, title
    search. A 429 gets one delayed retry before it is recorded."""

    database = SourceDatabase.SEMANTIC_SCHOLAR

    FIELDS = (
        "title,authors,journal,venue,year,abstract,publicationTypes,externalIds,"
        "isOpenAccess,publicationDate,fieldsOfStudy,s2FieldsOfStudy,referenceCount,"
        "citationCount,influentialCitationCount"
    )
    SEARCH_CAP = 10

    def arxiv_lookup_url(self, arxiv_id: ArxivId) -> str:
        return f"{self.config.semantic_scholar_base_url}/paper/ARXIV:{arxiv_id.normalized}?fields={self.FIELDS}"

    def doi_lookup_url(self, doi: Doi) -> str:
        return f"{self.config.semantic_scholar_base_url}/paper/DOI:{doi.value}?fields={self.FIELDS}"

    def search_url(self, title: str) -> str:
        return (
            f"{self.config.semantic_scholar_base_url}/paper/search"
            f"?query={quote(title)}&fields={self.FIELDS}"
        )

    def _headers(self) -> dict:
        headers = self._user_agent_headers()
        if self.config.semantic_scholar_api_key:
            headers["x-api-key"] = self.config.semantic_scholar_api_key
        return headers

    def _get_with_retry(self, url: str, errors: list[str]) -> Optional[HttpResponse]:
        try:
            response = self.transport.get(url, headers=self._headers())
        except RateLimited:
            time.sleep(self.config.retry_base_delay)
            try:
                response = self.transport.get(url, headers=self._headers())
            except (NetworkError, RateLimited) as exc:
                errors.append(f"{type(exc).__name__}: {exc}")
                return None
        except NetworkError as exc:
            errors.append(f"{type(exc).__name__}: {exc}")
            return None
        if response.status == 404:
            return None
        if not response.ok:
            errors.append(f"HTTP {response.status} from {url}")
            return None
        return response

    def _cascade(self, q: CandidateQuery, errors: list[str]) -> list[PublicationCandidate]:
        response = self._get_with_retry(self.arxiv_lookup_url(q.arxiv_id), errors)
        if response is not None:
            paper = self._decode_json(response, errors)
            if isinstance(paper, dict):
                candidate = self._parse_paper(
                    paper, DiscoveryPath(DiscoveryKind.DIRECT_ARXIV_ID, 1), q
                )
                if candidate is not None:
                    return [candidate]

        if q.doi is not None:
            response = self._get_with_retry(self.doi_lookup_url(q.doi), errors)
            if response is not None:
                paper = self._decode_json(response, errors)
                if isinstance(paper, dict):
                    candidate = self._parse_paper(
                        paper, DiscoveryPath(DiscoveryKind.DIRECT_DOI, 2), q
                    )
                    if candidate is not None:
                        return [candidate]

        response = self._get_with_retry(self.search_url(q.title), errors)
        if response is None:
            return []
        data = self._decode_json(response, errors)
        if not isinstance(data, dict):
            return []
        candidates = []
        for paper in _as_list(data.get("data"))[: self.SEARCH_CAP]:
            if isinstance(paper, dict):
                candidate = self._parse_paper(
                    paper, DiscoveryPath(DiscoveryKind.TITLE_SEARCH, 3), q
                )
                if candidate is not None:
                    candidates.append(candidate)
        return candidates

    def _parse_paper(
        self, paper: dict, discovery: DiscoveryPath, q: CandidateQuery
    ) -> Optional[PublicationCandidate]:
        title = _first_string(paper.get("title"))
        if not title or not normalize_title(title):
            return None
        authors = tuple(
            PersonName.from_full(author["name"])
            for author in _as_list(paper.get("authors"))
            if isinstance(author, dict) and isinstance(author.get("name"), str) and author["name"].strip()
        )
        journal_info = paper.get("journal") or {}
        journal = journal_info.get("name") if isinstance(journal_info, dict) else None
        venue = _first_string(paper.get("venue"))
        external = {
            str(scheme): str(value)
            for scheme, value in (paper.get("externalIds") or {}).items()
            if value is not None
        }
        if discovery.kind is DiscoveryKind.DIRECT_ARXIV_ID:
            external["ArXiv"] = q.arxiv_id.normalized
        types = tuple(
            t for t in _as_list(paper.get("publicationTypes")) if isinstance(t, str) and t
        )
        return PublicationCandidate(
            source=self.database,
            discovery=discovery,
            title=title,
            authors=authors,
            doi=Doi.parse(external.get("DOI")),
            venue=venue,
            journal=journal if isinstance(journal, str) and journal.strip() else None,
            year=_int_or_none(paper.get("year")),
            publication_types=types,
            external_ids=external,
            is_open_access=paper.get("isOpenAccess") if isinstance(paper.get("isOpenAccess"), bool) else None,
            citation_count=_int_or_none(paper.get("citationCount")),
            raw_payload=candidate_raw_payload(paper),
        )


class OpenAlexProvider(Provider):
    """Three-level cascade: DOI lookup, title search filtered to works
    linking the arXiv id, then the unfiltered search results (no new
    request) for strong filtering."""

    database = SourceDatabase.OPENALEX

    def doi_lookup_url(self, doi: Doi) -> str:
        url = f"{self.config.openalex_base_url}/doi={quote(doi.value, safe='/')}"
        if self.config.mailto:
            url += f"?mailto={quote(self.config.mailto)}"
        return url

    def search_url(self, title: str) -> str:
        params = {"search": title}
        if self.config.mailto:
            params["mailto"] = self.config.mailto
        return f"{self.config.openalex_base_url}?{urlencode(params, quote_via=quote)}"

    def _cascade(self, q: CandidateQuery, errors: list[str]) -> list[PublicationCandidate]:
        if q.doi is not None:
            response = self._step_get(self.doi_lookup_url(q.doi), errors)
            if response is not None:
                work = self._decode_json(response, errors)
                if isinstance(work, dict):
                    candidate = self._parse_work(
                        work, DiscoveryPath(DiscoveryKind.DIRECT_DOI, 1), q
                    )
                    if candidate is not None:
                        return [candidate]

        response = self._step_get(self.search_url(q.title), errors)
        if response is None:
            return []
        data = self._decode_json(response, errors)
        if not isinstance(data, dict):
            return []
        works = [w for w in _as_list(data.get("results")) if isinstance(w, dict)]

        linked = [w for w in works if _work_links_arxiv(w, q.arxiv_id.normalized)]
        if linked:
            candidates = []
            for work in linked:
                candidate = self._parse_work(
                    work, DiscoveryPath(DiscoveryKind.DIRECT_ARXIV_ID, 2), q
                )
                if candidate is not None:
                    candidates.append(candidate)
            if candidates:
                return candidates

        candidates = []
        for work in works:
            candidate = self._parse_work(work, DiscoveryPath(DiscoveryKind.TITLE_SEARCH, 3), q)
            if candidate is not None:
                candidates.append(candidate)
        return candidates

    def _parse_work(
        self, work: dict, discovery: DiscoveryPath, q: CandidateQuery
    ) -> Optional[PublicationCandidate]:
        title = _first_string(work.get("display_name") or work.get("title"))
        if not title or not normalize_title(title):
            return None
        authors = []
        for authorship in _as_list(work.get("authorships")):
            if not isinstance(authorship, dict):
                continue
            author = authorship.get("author") or {}
            name = author.get("display_name") if isinstance(author, dict) else None
            name = name or authorship.get("raw_author_name")
            if isinstance(name, str) and name.strip():
                authors.append(PersonName.from_full(name))
        venue = None
        journal = None
        location = work.get("primary_location") or {}
        source = location.get("source") if isinstance(location, dict) else None
        if isinstance(source, dict):
            name = source.get("display_name")
            if isinstance(name, str) and name.strip():
                if source.get("type") == "journal":
                    journal = name
                else:
                    venue = name
        doi = Doi.parse(work.get("doi"))
        external: dict[str, str] = {}
        ids = work.get("ids") or {}
        if isinstance(ids, dict):
            for scheme, value in ids.items():
                if isinstance(value, (str, int)):
                    external[str(scheme)] = str(value)
        if doi is not None:
            external.setdefault("DOI", doi.value)
        if discovery.kind is DiscoveryKind.DIRECT_ARXIV_ID:
            external["ArXiv"] = q.arxiv_id.normalized
        types = tuple(
            str(t)
            for t in (work.get("type"), work.get("type_crossref"))
            if isinstance(t, str) and t
        )
        open_access = work.get("open_access") or {}
        is_oa = open_access.get("is_oa") if isinstance(open_access, dict) else None
        return PublicationCandidate(
            source=self.database,
            discovery=discovery,
            title=title,
            authors=tuple(authors),
            doi=doi,
            venue=venue,
            journal=journal,
            year=_int_or_none(work.get("publication_year")),
            publication_types=types,
            external_ids=external,
            is_open_access=is_oa if isinstance(is_oa, bool) else None,
            citation_count=_int_or_none(work.get("cited_by_count")),
            raw_payload=candidate_raw_payload(work),
        )


def _work_links_arxiv(work: dict, normalized_id: str) -> bool:
    """Does any location or id of this work point at the queried arXiv id?"""
    pattern = re.compile(
        rf"arxiv\.org/(?:abs|pdf)/{re.escape(normalized_id)}(?!\d)", re.IGNORECASE
    )
    texts: list[str] = []
    locations = _as_list(work.get("locations"))
    if isinstance(work.get("primary_location"), dict):
        locations.append(work["primary_location"])
    for location in locations:
        if not isinstance(location, dict):
            continue
        for key in ("landing_page_url", "pdf_url"):
            value = location.get(key)
            if isinstance(value, str):
                texts.append(value)
    ids = work.get("ids") or {}
    if isinstance(ids, dict):
        texts.extend(str(v) for v in ids.values())
    return any(pattern.search(text) for text in texts)


PROVIDER_CLASSES: dict[SourceDatabase, type[Provider]] = {
    SourceDatabase.DBLP: DblpProvider,
    SourceDatabase.CROSSREF_CROSSCITE: CrossrefCrossciteProvider,
    SourceDatabase.SEMANTIC_SCHOLAR: SemanticScholarProvider,
    SourceDatabase.OPENALEX: OpenAlexProvider,
}

DATABASE_ALIASES = {
    "dblp": SourceDatabase.DBLP,
    "crossref": SourceDatabase.CROSSREF_CROSSCITE,
    "crosscite": SourceDatabase.CROSSREF_CROSSCITE,
    "crossref_crosscite": SourceDatabase.CROSSREF_CROSSCITE,
    "crossref/crosscite": SourceDatabase.CROSSREF_CROSSCITE,
    "semantic_scholar": SourceDatabase.SEMANTIC_SCHOLAR,
    "semanticscholar": SourceDatabase.SEMANTIC_SCHOLAR,
    "s2": SourceDatabase.SEMANTIC_SCHOLAR,
    "openalex": SourceDatabase.OPENALEX,
}


def parse_database_name(name: str) -> SourceDatabase:
    key = name.strip().lower()
    if key not in DATABASE_ALIASES:
        raise ValueError(f"unknown database {name!r}; known: {sorted(set(DATABASE_ALIASES))}")
    return DATABASE_ALIASES[key]


def make_providers(transport: Transport, config: ResolverConfig) -> dict[SourceDatabase, Provider]:
    enabled = set(SourceDatabase)
    if config.enabled_databases is not None:
        enabled = {parse_database_name(name) for name in config.enabled_databases}
    return {
        db: PROVIDER_CLASSES[db](transport, config) for db in SourceDatabase if db in enabled
    }


def query_all_timed(
    q: CandidateQuery,
    providers: dict[SourceDatabase, Provider],
    budget: float = 30.0,
) -> tuple[list[ProviderResult], dict[SourceDatabase, float]]:
    """Fan out to the configured providers concurrently. The returned list
    always holds one result per database, in enum order, no matter the
    completion order; databases that are disabled yield empty results and
    databases that overrun the budget yield empty results with an error."""
    results: dict[SourceDatabase, ProviderResult] = {}
    timings: dict[SourceDatabase, float] = {db: 0.0 for db in SourceDatabase}

    def run(provider: Provider) -> tuple[ProviderResult, float]:
        started = time.perf_counter()
        result = provider.query(q)
        return result, (time.perf_counter() - started) * 1000.0

    if providers:
        executor = ThreadPoolExecutor(max_workers=len(providers))
        futures = {db: executor.submit(run, provider) for db, provider in providers.items()}
        deadline = time.monotonic() + budget
        for db in SourceDatabase:
            future = futures.get(db)
            if future is None:
                results[db] = ProviderResult.build(db)
                continue
            remaining = max(0.0, deadline - time.monotonic())
            try:
                result, elapsed = future.result(timeout=remaining)
            except FutureTimeoutError:
                result = ProviderResult.build(
                    db, errors=(f"timed out after {budget:.0f}s budget",)
                )
                elapsed = remaining * 1000.0
            results[db] = result
            timings[db] = elapsed
        executor.shutdown(wait=False)
    else:
        for db in SourceDatabase:
            results[db] = ProviderResult.build(db)

    return [results[db] for db in SourceDatabase], timings


def query_all(
    q: CandidateQuery,
    providers: dict[SourceDatabase, Provider],
    budget: float = 30.0,
) -> list[ProviderResult]:
    results, _ = query_all_timed(q, providers, budget)
    return results
