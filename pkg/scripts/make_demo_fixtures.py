#!/usr/bin/env python3
"""Regenerate the committed demo fixture directory used by the README
examples (tests/fixtures/demo): one resolvable preprint, one that no
database knows, and one id arXiv has never heard of."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fixture_builder import (  # noqa: E402
    Scenario,
    arxiv_empty_feed,
    dblp_hit,
    install_scenario,
    s2_paper,
)

from arxpub.arxiv import ArxivClient  # noqa: E402
from arxpub.idnorm import normalize_arxiv_input  # noqa: E402
from arxpub.transport import write_fixture  # noqa: E402

DEMO_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "demo"

AUTHORS = ["Ada Lovelace", "Boris Chen", "Grace Hopper"]
TITLE = "Neural Document Ranking with Sparse Attention"


def main() -> None:
    DEMO_DIR.mkdir(parents=True, exist_ok=True)
    for stale in DEMO_DIR.iterdir():
        stale.unlink()

    install_scenario(DEMO_DIR, Scenario(
        arxiv_id="2101.00001",
        title=TITLE,
        authors=AUTHORS,
        published="2021-01-02T12:00:00Z",
        version=2,
        comment="Accepted at an information retrieval venue",
        dblp_hits=[dblp_hit(TITLE, AUTHORS, venue="SIGIR", year=2021, doi="10.1145/demo.1",
                            key="conf/sigir/demo1")],
        s2_direct=s2_paper(TITLE, AUTHORS, venue="SIGIR", year=2021, types=("Conference",),
                           external={"ArXiv": "2101.00001", "DOI": "10.1145/demo.1"},
                           citations=23),
    ))

    install_scenario(DEMO_DIR, Scenario(
        arxiv_id="2101.00002",
        title="A Manuscript Still Waiting for Reviews",
        authors=AUTHORS,
        published="2021-01-05T12:00:00Z",
    ))

    ghost = normalize_arxiv_input("0000.00000")
    write_fixture(DEMO_DIR, "0000_00000_arxiv.txt",
                  ArxivClient(None).query_url(ghost), arxiv_empty_feed())

    print(f"wrote {len(list(DEMO_DIR.iterdir()))} fixtures to {DEMO_DIR}")


if __name__ == "__main__":
    main()
