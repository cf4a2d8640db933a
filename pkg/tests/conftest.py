import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixture_builder import install_corpus  # noqa: E402
from corpus import CORPUS  # noqa: E402

from arxpub.config import ResolverConfig
from arxpub.model import (
    ArxivId,
    DiscoveryKind,
    DiscoveryPath,
    Doi,
    PersonName,
    PreprintRecord,
    PublicationCandidate,
    SourceDatabase,
)


class StubTransport:
    """In-memory transport for unit tests: canned (status, body) per URL,
    optional artificial delay, captured request headers."""

    def __init__(self, responses=None, delays=None):
        from arxpub.transport import Transport

        self._base = Transport()
        self.responses = dict(responses or {})
        self.delays = dict(delays or {})
        self.headers_seen = {}

    @property
    def request_log(self):
        return self._base.request_log

    def reset_log(self):
        self._base.reset_log()

    def get(self, url, headers=None):
        import time as _time

        from arxpub.errors import FixtureMissing
        from arxpub.transport import HttpResponse

        self._base._log.append(url)
        self.headers_seen[url] = dict(headers or {})
        for needle, pause in self.delays.items():
            if needle in url:
                _time.sleep(pause)
        if url not in self.responses:
            raise FixtureMissing(f"no stubbed response for {url}")
        status, body = self.responses[url]
        if status == 429:
            from arxpub.errors import RateLimited

            raise RateLimited(f"429 from {url}")
        return HttpResponse(url=url, status=status, body=body)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    """All twenty scenarios installed into one replay directory."""
    directory = tmp_path_factory.mktemp("corpus")
    install_corpus(directory, CORPUS)
    return directory


@pytest.fixture
def replay_config(corpus_dir) -> ResolverConfig:
    return ResolverConfig(fixtures_dir=corpus_dir, retry_base_delay=0.0)


def make_preprint(
    arxiv_id="2101.00001",
    title="A Sample Title",
    authors=("Ada Lovelace", "Boris Chen"),
    doi=None,
    published=date(2021, 1, 2),
    primary="cs.LG",
):
    return PreprintRecord(
        id=ArxivId(raw=arxiv_id, normalized=arxiv_id, version=None),
        latest_version=1,
        title=title,
        authors=tuple(PersonName.from_full(a) for a in authors),
        doi=Doi(doi) if doi else None,
        published_date=published,
        updated_date=published,
        primary_category=primary,
        categories=(primary,),
        abstract="An abstract.",
    )


def make_candidate(
    source=SourceDatabase.DBLP,
    kind=DiscoveryKind.TITLE_SEARCH,
    step=1,
    title="A Sample Title",
    authors=("Ada Lovelace", "Boris Chen"),
    doi=None,
    venue="NeurIPS",
    journal=None,
    year=2021,
    types=("Conference and Workshop Papers",),
    external=None,
    citations=None,
):
    return PublicationCandidate(
        source=source,
        discovery=DiscoveryPath(kind, step),
        title=title,
        authors=tuple(PersonName.from_full(a) for a in authors),
        doi=Doi(doi) if doi else None,
        venue=venue,
        journal=journal,
        year=year,
        publication_types=tuple(types) if types else (),
        external_ids=dict(external or {}),
        citation_count=citations,
    )
