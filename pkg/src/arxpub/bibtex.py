"""Render preprints and accepted candidates as BibTeX entries.

Values are kept as UTF-8 by default (modern BibTeX consumers accept it);
an optional legacy mode transliterates the most common accented letters
to TeX escape sequences. Unbalanced braces in incoming metadata are
dropped so every rendered entry stays syntactically valid.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import MissingCoreFields
from .model import (
    PersonName,
    PreprintRecord,
    PublicationCandidate,
    fold_text,
    normalize_title,
)

_CITE_KEY_ALLOWED = re.compile(r"[^A-Za-z0-9:_-]+")

# Legacy transliteration for consumers that cannot read UTF-8 .bib files.
TEX_ESCAPES = {
    "ä": r'\"{a}', "ö": r'\"{o}', "ü": r'\"{u}', "ë": r'\"{e}', "ï": r'\"{i}',
    "Ä": r'\"{A}', "Ö": r'\"{O}', "Ü": r'\"{U}',
    "á": r"\'{a}", "é": r"\'{e}", "í": r"\'{i}", "ó": r"\'{o}", "ú": r"\'{u}",
    "à": r"\`{a}", "è": r"\`{e}", "ì": r"\`{i}", "ò": r"\`{o}", "ù": r"\`{u}",
    "â": r"\^{a}", "ê": r"\^{e}", "î": r"\^{i}", "ô": r"\^{o}", "û": r"\^{u}",
    "ñ": r"\~{n}", "ã": r"\~{a}", "õ": r"\~{o}",
    "ç": r"\c{c}", "å": r"\r{a}", "ø": r"{\o}", "æ": r"{\ae}", "ß": r"{\ss}",
}

_SPECIALS = {"&": r"\&", "%": r"\%", "#": r"\#", "_": r"\_", "$": r"\$"}


def balance_braces(text: str) -> str:
    """Drop braces that do not pair up, keeping everything else."""
    keep = [True] * len(text)
    stack: list[int] = []
    for i, ch in enumerate(text):
        if ch == "{":
            stack.append(i)
        elif ch == "}":
            if stack:
                stack.pop()
            else:
                keep[i] = False
    for i in stack:
        keep[i] = False
    return "".join(ch for i, ch in enumerate(text) if keep[i])


def escape_value(text: str, tex_escape: bool = False) -> str:
    text = balance_braces(text)
    out = []
    for ch in text:
        if ch in _SPECIALS:
            out.append(_SPECIALS[ch])
        elif tex_escape and ch in TEX_ESCAPES:
            out.append(TEX_ESCAPES[ch])
        else:
            out.append(ch)
    return "".join(out)


class CiteKeyAllocator:
    """Hands out report-unique cite keys; collisions get alphabetic
    suffixes in allocation order."""

    def __init__(self) -> None:
        self._used: set[str] = set()

    def allocate(self, base: str) -> str:
        base = base or "entry"
        if base not in self._used:
            self._used.add(base)
            return base
        for n in range(26 * 27):  # a..z, aa..zz
            suffix = ""
            k = n
            while True:
                suffix = chr(ord("a") + k % 26) + suffix
                k = k // 26 - 1
                if k < 0:
                    break
            key = base + suffix
            if key not in self._used:
                self._used.add(key)
                return key
        raise MissingCoreFields(f"cannot allocate a unique cite key for {base!r}")


def _ascii_slug(text: str) -> str:
    folded = fold_text(text)
    folded = folded.encode("ascii", errors="ignore").decode("ascii")
    return _CITE_KEY_ALLOWED.sub("", folded)


def make_cite_key(authors: Iterable[PersonName], year: Optional[int], title: str) -> str:
    first_author = next(iter(authors), None)
    surname = _ascii_slug(first_author.surname) if first_author else ""
    first_word = ""
    for token in normalize_title(title).split():
        slug = _ascii_slug(token)
        if slug:
            first_word = slug
            break
    parts = [surname or "anon", str(year) if year else "", first_word]
    return "".join(parts) or "entry"


@dataclass
class BibTexEntry:
    entry_type: str
    cite_key: str
    fields: dict[str, str] = field(default_factory=dict)

    def render(self) -> str:
        lines = [f"@{self.entry_type}{{{self.cite_key},"]
        for name, value in self.fields.items():
            lines.append(f"  {name} = {{{value}}},")
        if len(lines) > 1:
            lines[-1] = lines[-1].rstrip(",")
        lines.append("}")
        return "\n".join(lines)


def render_entries(entries: Iterable[BibTexEntry]) -> str:
    return "\n\n".join(entry.render() for entry in entries)


_JOURNALISH = ("journal",)
_CONFERENCISH = ("conference", "proceedings", "inproceedings", "workshop", "paper-conference")
_COLLECTIONISH = ("chapter", "section", "incollection", "collection", "parts in books")
_BOOKISH = ("book", "monograph", "thesis", "theses")


def classify_entry_type(candidate: PublicationCandidate) -> str:
    """article | inproceedings | incollection | book | misc, from the
    database's publication-type strings with venue/journal as tiebreak."""
    blob = " ".join(candidate.publication_types).lower()
    if any(token in blob for token in _COLLECTIONISH):
        return "incollection"
    if any(token in blob for token in _CONFERENCISH):
        return "inproceedings"
    if any(token in blob for token in _JOURNALISH):
        return "article"
    if any(token in blob for token in _BOOKISH):
        return "book"
    if blob.strip() in ("article", "review"):
        return "article"
    if candidate.journal:
        return "article"
    if candidate.venue and any(t in candidate.venue.lower() for t in ("proceedings", "conference", "workshop", "symposium")):
        return "inproceedings"
    return "misc"


def _join_authors(authors: Iterable[PersonName]) -> str:
    return " and ".join(person.full for person in authors)


def render_candidate(
    candidate: PublicationCandidate,
    keys: Optional[CiteKeyAllocator] = None,
    tex_escape: bool = False,
) -> BibTexEntry:
    """BibTeX entry for one accepted candidate."""
    if not candidate.title.strip() or not candidate.authors:
        raise MissingCoreFields("a citation needs a title and at least one author")
    entry_type = classify_entry_type(candidate)
    allocator = keys or CiteKeyAllocator()
    cite_key = allocator.allocate(
        make_cite_key(candidate.authors, candidate.year, candidate.title)
    )
    fields: dict[str, str] = {
        "author": escape_value(_join_authors(candidate.authors), tex_escape),
        "title": escape_value(candidate.title, tex_escape),
    }
    container = candidate.journal or candidate.venue
    if container:
        slot = "journal" if entry_type == "article" else "booktitle"
        if entry_type == "book":
            slot = "publisher"
        if entry_type == "misc":
            container = None
        if container:
            fields[slot] = escape_value(container, tex_escape)
    if candidate.year:
        fields["year"] = str(candidate.year)
    if candidate.doi:
        fields["doi"] = escape_value(candidate.doi.value, tex_escape)
        fields["url"] = escape_value(f"https://doi.org/{candidate.doi.value}", tex_escape)
    return BibTexEntry(entry_type=entry_type, cite_key=cite_key, fields=fields)


def render_preprint(
    preprint: PreprintRecord,
    keys: Optional[CiteKeyAllocator] = None,
    tex_escape: bool = False,
) -> BibTexEntry:
    """@misc entry for the preprint itself, eprint fields included."""
    allocator = keys or CiteKeyAllocator()
    year = preprint.published_date.year
    cite_key = allocator.allocate(make_cite_key(preprint.authors, year, preprint.title))
    fields: dict[str, str] = {
        "author": escape_value(_join_authors(preprint.authors), tex_escape),
        "title": escape_value(preprint.title, tex_escape),
        "year": str(year),
        "eprint": preprint.id.normalized,
        "archivePrefix": "arXiv",
    }
    if preprint.primary_category:
        fields["primaryClass"] = escape_value(preprint.primary_category, tex_escape)
    if preprint.doi:
        fields["doi"] = escape_value(preprint.doi.value, tex_escape)
    fields["url"] = f"https://arxiv.org/abs/{preprint.id.normalized}"
    return BibTexEntry(entry_type="misc", cite_key=cite_key, fields=fields)
