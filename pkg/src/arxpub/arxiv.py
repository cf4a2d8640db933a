"""Client for the public arXiv metadata API (Atom feeds)."""

from __future__ import annotations

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date, datetime, timezone
from typing import Optional
from urllib.parse import quote

from .errors import NotFound, ParseError
from .model import ArxivId, Doi, PersonName, PreprintRecord, collapse_whitespace
from .transport import Transport

logger = logging.getLogger(__name__)

ATOM = "{http://www.w3.org/2005/Atom}"
ARXIV = "{http://arxiv.org/schemas/atom}"

_VERSION_SUFFIX = re.compile(r"v(\d+)$")


@dataclass(frozen=True)
class ArxivApiResponse:
    """One parsed feed: the usable entry elements plus the fetch time.
    For a single-id query that is exactly one entry, or none (the API's
    empty-result marker is a feed without entries, or with an error
    entry for malformed ids)."""

    entries: tuple[ET.Element, ...]
    fetched_at: datetime

    def single_entry(self, arxiv_id: ArxivId) -> ET.Element:
        if not self.entries:
            raise NotFound(f"arXiv has no entry for {arxiv_id.normalized}")
        if len(self.entries) > 1:
            logger.warning(
                "arXiv returned %d entries for %s; using the first",
                len(self.entries), arxiv_id.normalized,
            )
        return self.entries[0]


class ArxivClient:
    def __init__(self, transport: Transport, base_url: str = "https://export.arxiv.org/api/query") -> None:
        self.transport = transport
        self.base_url = base_url.rstrip("?")

    def query_url(self, arxiv_id: ArxivId) -> str:
        # old-style ids contain "/", which the API accepts unencoded
        return f"{self.base_url}?id_list={quote(arxiv_id.normalized, safe='/')}"

    def fetch_feed(self, arxiv_id: ArxivId) -> ArxivApiResponse:
        response = self.transport.get(self.query_url(arxiv_id))
        try:
            feed = ET.fromstring(response.body)
        except ET.ParseError as exc:
            raise ParseError(f"arXiv feed for {arxiv_id.normalized} is not valid XML: {exc}") from exc
        entries = tuple(
            e for e in feed.findall(f"{ATOM}entry") if not _is_error_entry(e)
        )
        return ArxivApiResponse(entries=entries, fetched_at=datetime.now(timezone.utc))

    def fetch_preprint(self, arxiv_id: ArxivId) -> PreprintRecord:
        """Fetch and parse the feed entry for one id.

        Raises NotFound when the feed has no (usable) entry, ParseError on
        malformed XML, and lets transport errors propagate.
        """
        feed = self.fetch_feed(arxiv_id)
        return _parse_entry(feed.single_entry(arxiv_id), arxiv_id)


def _is_error_entry(entry: ET.Element) -> bool:
    entry_id = _text(entry, f"{ATOM}id")
    return "api/errors" in (entry_id or "")


def _text(element: ET.Element, tag: str) -> Optional[str]:
    node = element.find(tag)
    if node is None or node.text is None:
        return None
    return node.text


def _parse_date(value: Optional[str]) -> date:
    if not value:
        raise ParseError("feed entry lacks a date")
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00")).date()
    except ValueError as exc:
        raise ParseError(f"unparseable date {value!r}") from exc


def _parse_entry(entry: ET.Element, arxiv_id: ArxivId) -> PreprintRecord:
    entry_uri = _text(entry, f"{ATOM}id") or ""
    version_match = _VERSION_SUFFIX.search(entry_uri)
    latest_version = int(version_match.group(1)) if version_match else 1

    title = collapse_whitespace(_text(entry, f"{ATOM}title") or "")
    if not title:
        raise ParseError(f"entry for {arxiv_id.normalized} has no title")

    authors = tuple(
        PersonName.from_full(name)
        for author in entry.findall(f"{ATOM}author")
        if (name := _text(author, f"{ATOM}name"))
    )
    if not authors:
        raise ParseError(f"entry for {arxiv_id.normalized} has no authors")

    doi = Doi.parse(_text(entry, f"{ARXIV}doi"))

    published = _parse_date(_text(entry, f"{ATOM}published"))
    updated = _parse_date(_text(entry, f"{ATOM}updated"))

    primary = entry.find(f"{ARXIV}primary_category")
    primary_category = primary.get("term", "") if primary is not None else ""
    categories = tuple(
        term for node in entry.findall(f"{ATOM}category") if (term := node.get("term"))
    )
    if not categories and primary_category:
        categories = (primary_category,)
    if not primary_category and categories:
        primary_category = categories[0]

    comment = _text(entry, f"{ARXIV}comment")
    journal_ref = _text(entry, f"{ARXIV}journal_ref")
    abstract = collapse_whitespace(_text(entry, f"{ATOM}summary") or "")

    return PreprintRecord(
        id=arxiv_id,
        latest_version=latest_version,
        title=title,
        authors=authors,
        doi=doi,
        published_date=published,
        updated_date=updated,
        primary_category=primary_category,
        categories=categories,
        comment=collapse_whitespace(comment) if comment else None,
        journal_ref=collapse_whitespace(journal_ref) if journal_ref else None,
        abstract=abstract,
    )
