"""Turn arbitrary user input (bare id, prefixed id, or arXiv URL) into a
normalized :class:`~arxpub.model.ArxivId`.

The steps, in order: trim whitespace; cut everything up to and including
the last occurrence of "arxiv:", "abs/" or "pdf/" (case-insensitive);
drop a trailing ".pdf"; lowercase; split a trailing "vN" version suffix.
"""

from __future__ import annotations

import re

from .errors import EmptyAfterStripping, EmptyInput, InvalidId
from .model import ArxivId

_PREFIXES = ("arxiv:", "abs/", "pdf/")

# A version suffix only splits off when the remainder still ends in a
# digit, so old-style ids ("cs/9901001v2") split and words ending in
# "v<digits>" do not.
_VERSION_RE = re.compile(r"^(?P<body>.*\d)v(?P<num>\d+)$")


def normalize_arxiv_input(raw: str) -> ArxivId:
    text = raw.strip()
    if not text:
        raise EmptyInput("input is empty")

    lowered = text.lower()
    last_start = -1
    cut_end = -1
    for prefix in _PREFIXES:
        pos = lowered.rfind(prefix)
        if pos > last_start:
            last_start = pos
            cut_end = pos + len(prefix)
    if cut_end >= 0:
        text = text[cut_end:]

    while text.lower().endswith(".pdf"):
        text = text[:-4]

    # prefix cutting can expose whitespace; the id itself never carries it
    text = text.strip()
    if not text:
        raise EmptyAfterStripping(f"nothing left of {raw!r} after prefix stripping")

    normalized = text.lower()
    version = None
    match = _VERSION_RE.match(normalized)
    if match and int(match.group("num")) >= 1:
        normalized = match.group("body")
        version = int(match.group("num"))

    # Every arXiv id, old style or new, contains digits. This is a shape
    # check only; whether the id exists is the arXiv API's call.
    if not any(ch.isdigit() for ch in normalized):
        raise InvalidId(f"{normalized!r} does not look like an arXiv id")

    return ArxivId(raw=raw, normalized=normalized, version=version)
