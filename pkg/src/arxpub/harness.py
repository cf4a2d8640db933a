"""Dataset statistics and bulk-resolution experiments.

Works over the public arXiv metadata snapshot (one JSON record per line:
id, title, authors, doi, journal-ref, categories, versions with creation
dates). "Without publication information" means the record carries
neither a DOI nor a journal reference.
"""

from __future__ import annotations

import csv
import json
import random
import time
from dataclasses import dataclass, field as dataclass_field
from datetime import date, datetime
from email.utils import parsedate_to_datetime
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .errors import PopulationTooSmall, ResolverError
from .model import SourceDatabase
from .resolver import Resolver

# Research fields by primary-category prefix. The physics umbrella covers
# arXiv's documented physics archives plus their legacy aliases; legacy
# math and cs aliases map home as well. Unknown prefixes predate the
# non-physics archives and default to Physics.
FIELD_PHYSICS = "Physics"
_PHYSICS_PREFIXES = {
    "astro-ph", "cond-mat", "gr-qc", "hep-ex", "hep-lat", "hep-ph", "hep-th",
    "math-ph", "nlin", "nucl-ex", "nucl-th", "physics", "quant-ph",
    # legacy archives
    "chao-dyn", "adap-org", "solv-int", "patt-sol", "comp-gas",
    "mtrl-th", "supr-con", "acc-phys", "ao-sci", "atom-ph", "bayes-an",
    "chem-ph", "plasm-ph",
}
_FIELD_BY_PREFIX = {
    "cs": "Computer Science",
    "cmp-lg": "Computer Science",
    "math": "Mathematics",
    "alg-geom": "Mathematics",
    "dg-ga": "Mathematics",
    "funct-an": "Mathematics",
    "q-alg": "Mathematics",
    "q-bio": "Quantitative Biology",
    "q-fin": "Quantitative Finance",
    "stat": "Statistics",
    "eess": "Electrical Engineering and Systems Science",
    "econ": "Economics",
}
FIELD_ORDER = (
    FIELD_PHYSICS,
    "Mathematics",
    "Computer Science",
    "Quantitative Biology",
    "Quantitative Finance",
    "Statistics",
    "Electrical Engineering and Systems Science",
    "Economics",
)


def field_for_category(category: str) -> str:
    prefix = category.strip().split(".")[0].lower()
    if prefix in _FIELD_BY_PREFIX:
        return _FIELD_BY_PREFIX[prefix]
    if prefix in _PHYSICS_PREFIXES:
        return FIELD_PHYSICS
    return FIELD_PHYSICS


def _field_matches(selector: str, field_name: str) -> bool:
    wanted = selector.strip().lower()
    if not wanted:
        return True
    if wanted == field_name.lower():
        return True
    prefix_field = _FIELD_BY_PREFIX.get(wanted) or (FIELD_PHYSICS if wanted in _PHYSICS_PREFIXES else None)
    return prefix_field == field_name


@dataclass
class FieldStats:
    preprint_count: int = 0
    count_without_publication_info: int = 0
    version_total: int = 0

    @property
    def ratio_without_info(self) -> float:
        if self.preprint_count == 0:
            return 0.0
        return self.count_without_publication_info / self.preprint_count

    @property
    def mean_version_count(self) -> float:
        if self.preprint_count == 0:
            return 0.0
        return self.version_total / self.preprint_count

    def add(self, without_info: bool, versions: int) -> None:
        self.preprint_count += 1
        if without_info:
            self.count_without_publication_info += 1
        self.version_total += versions


@dataclass
class SnapshotStats:
    per_field: dict[str, FieldStats]
    overall: FieldStats
    malformed_count: int = 0


@dataclass
class SnapshotRecord:
    arxiv_id: str
    field: str
    has_publication_info: bool
    version_count: int
    first_submitted: Optional[date]


def _iter_lines(snapshot: Union[str, Path, Iterable[str]]) -> Iterator[str]:
    if isinstance(snapshot, (str, Path)):
        with open(snapshot, "r", encoding="utf-8") as handle:
            yield from handle
    else:
        yield from snapshot


def _primary_category(record: dict) -> Optional[str]:
    categories = record.get("categories")
    if isinstance(categories, str):
        tokens = categories.split()
        return tokens[0] if tokens else None
    if isinstance(categories, list) and categories:
        first = categories[0]
        return str(first) if first else None
    return None


def _first_version_date(record: dict) -> Optional[date]:
    versions = record.get("versions")
    if not isinstance(versions, list) or not versions:
        return None
    created = versions[0].get("created") if isinstance(versions[0], dict) else None
    if not isinstance(created, str):
        return None
    try:
        return parsedate_to_datetime(created).date()
    except (TypeError, ValueError):
        try:
            return datetime.fromisoformat(created).date()
        except ValueError:
            return None


def parse_snapshot_record(line: str) -> Optional[SnapshotRecord]:
    """One snapshot line to a record; None for blank lines; raises
    MalformedRecord-shaped ValueError for undecodable ones."""
    line = line.strip()
    if not line:
        return None
    record = json.loads(line)
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    arxiv_id = record.get("id")
    category = _primary_category(record)
    if not isinstance(arxiv_id, str) or not arxiv_id or not category:
        raise ValueError("record lacks id or categories")
    doi = record.get("doi")
    journal_ref = record.get("journal-ref")
    has_info = bool(doi) or bool(journal_ref)
    versions = record.get("versions")
    version_count = len(versions) if isinstance(versions, list) and versions else 1
    return SnapshotRecord(
        arxiv_id=arxiv_id,
        field=field_for_category(category),
        has_publication_info=has_info,
        version_count=version_count,
        first_submitted=_first_version_date(record),
    )


def compute_snapshot_stats(snapshot: Union[str, Path, Iterable[str]]) -> SnapshotStats:
    """Count preprints, missing publication info and mean versions per
    research field. Malformed lines are skipped and counted."""
    per_field: dict[str, FieldStats] = {}
    overall = FieldStats()
    malformed = 0
    for line in _iter_lines(snapshot):
        try:
            record = parse_snapshot_record(line)
        except (ValueError, AttributeError, TypeError):
            malformed += 1
            continue
        if record is None:
            continue
        stats = per_field.setdefault(record.field, FieldStats())
        without = not record.has_publication_info
        stats.add(without, record.version_count)
        overall.add(without, record.version_count)
    return SnapshotStats(per_field=per_field, overall=overall, malformed_count=malformed)


def sample_subset(
    snapshot: Union[str, Path, Iterable[str]],
    field: str,
    before: date,
    n: int,
    seed: int,
) -> list[str]:
    """Draw n ids without replacement from the eligible population:
    matching research field, no publication info, first submission before
    the cutoff. Deterministic per seed."""
    eligible: list[str] = []
    for line in _iter_lines(snapshot):
        try:
            record = parse_snapshot_record(line)
        except (ValueError, AttributeError, TypeError):
            continue
        if record is None or record.has_publication_info:
            continue
        if not _field_matches(field, record.field):
            continue
        if record.first_submitted is None or record.first_submitted >= before:
            continue
        eligible.append(record.arxiv_id)
    if n > len(eligible):
        raise PopulationTooSmall(f"asked for {n} of {len(eligible)} eligible preprints")
    return random.Random(seed).sample(eligible, n)


@dataclass
class BulkRunSummary:
    sample_size: int = 0
    overall_resolved: int = 0
    per_database_resolved: dict[SourceDatabase, int] = dataclass_field(
        default_factory=lambda: {db: 0 for db in SourceDatabase}
    )
    venn: dict[frozenset, int] = dataclass_field(default_factory=dict)
    per_year: dict[int, tuple[int, int]] = dataclass_field(default_factory=dict)
    failures: list[tuple[str, str]] = dataclass_field(default_factory=list)

    def check(self) -> None:
        """Internal-consistency invariants of the Venn decomposition."""
        if self.overall_resolved > self.sample_size:
            raise AssertionError("resolved more than sampled")
        if sum(self.venn.values()) != self.overall_resolved:
            raise AssertionError("venn cells do not sum to the resolved count")
        for db in SourceDatabase:
            cell_sum = sum(count for subset, count in self.venn.items() if db in subset)
            if cell_sum != self.per_database_resolved[db]:
                raise AssertionError(f"venn cells for {db.key} do not sum to its resolved count")
        year_resolved = sum(resolved for _, resolved in self.per_year.values())
        if year_resolved != self.overall_resolved:
            raise AssertionError("per-year resolved counts do not sum to the resolved count")

    @property
    def overall_ratio(self) -> float:
        return self.overall_resolved / self.sample_size if self.sample_size else 0.0


def bulk_resolve(
    sample: Sequence[str],
    resolver: Resolver,
    delay: float = 0.0,
    progress: Optional[Callable[[int, int, str, Optional[bool]], None]] = None,
) -> BulkRunSummary:
    """Resolve every id in the sample through the full pipeline. Per-id
    failures are recorded and the run continues. In live mode a delay
    between requests keeps the upstream APIs comfortable."""
    summary = BulkRunSummary(sample_size=len(sample))
    live = resolver.config.fixtures_dir is None
    for position, raw_id in enumerate(sample):
        if live and delay > 0 and position > 0:
            time.sleep(delay)
        try:
            outcome = resolver.resolve_input(raw_id)
        except ResolverError as exc:
            summary.failures.append((raw_id, f"{type(exc).__name__}: {exc}"))
            if progress:
                progress(position + 1, len(sample), raw_id, None)
            continue
        report = outcome.report
        contributing = frozenset(
            db for db in SourceDatabase if report.per_database.get(db)
        )
        year = report.preprint.published_date.year
        sampled, resolved = summary.per_year.get(year, (0, 0))
        if contributing:
            summary.overall_resolved += 1
            summary.venn[contributing] = summary.venn.get(contributing, 0) + 1
            for db in contributing:
                summary.per_database_resolved[db] += 1
            resolved += 1
        summary.per_year[year] = (sampled + 1, resolved)
        if progress:
            progress(position + 1, len(sample), raw_id, bool(contributing))
    summary.check()
    return summary


# ---------------------------------------------------------------- CSV output

def subset_bitmask(subset: frozenset) -> int:
    return sum(db.bit for db in subset)


def write_stats_csv(stats: SnapshotStats, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["field", "count", "count_without_info", "ratio", "mean_versions"])
        fields = [f for f in FIELD_ORDER if f in stats.per_field]
        fields += sorted(set(stats.per_field) - set(FIELD_ORDER))
        for name in fields:
            row = stats.per_field[name]
            writer.writerow(
                [name, row.preprint_count, row.count_without_publication_info,
                 f"{row.ratio_without_info:.4f}", f"{row.mean_version_count:.2f}"]
            )
        writer.writerow(
            ["Overall", stats.overall.preprint_count,
             stats.overall.count_without_publication_info,
             f"{stats.overall.ratio_without_info:.4f}",
             f"{stats.overall.mean_version_count:.2f}"]
        )


def write_summary_csv(summary: BulkRunSummary, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["database", "resolved", "ratio"])
        for db in SourceDatabase:
            count = summary.per_database_resolved[db]
            ratio = count / summary.sample_size if summary.sample_size else 0.0
            writer.writerow([db.label, count, f"{ratio:.4f}"])
        writer.writerow(["Overall", summary.overall_resolved, f"{summary.overall_ratio:.4f}"])


def write_venn_csv(summary: BulkRunSummary, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["subset_bitmask", "databases", "count"])
        cells = sorted(summary.venn.items(), key=lambda item: subset_bitmask(item[0]))
        for subset, count in cells:
            names = "+".join(db.label for db in SourceDatabase if db in subset)
            writer.writerow([subset_bitmask(subset), names, count])


def write_per_year_csv(summary: BulkRunSummary, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["year", "sample_count", "resolved_count", "rate"])
        for year in sorted(summary.per_year):
            sampled, resolved = summary.per_year[year]
            rate = resolved / sampled if sampled else 0.0
            writer.writerow([year, sampled, resolved, f"{rate:.4f}"])


def write_failures_csv(summary: BulkRunSummary, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["arxiv_id", "error"])
        for arxiv_id, error in summary.failures:
            writer.writerow([arxiv_id, error])
