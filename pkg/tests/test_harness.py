import csv
import json
import random
from datetime import date

import pytest

from arxpub.errors import PopulationTooSmall
from arxpub.harness import (
    BulkRunSummary,
    bulk_resolve,
    compute_snapshot_stats,
    field_for_category,
    sample_subset,
    write_per_year_csv,
    write_stats_csv,
    write_summary_csv,
    write_venn_csv,
)
from arxpub.model import SourceDatabase
from arxpub.resolver import Resolver


def record(arxiv_id, category="cs.LG", doi=None, journal_ref=None, versions=1,
           created="Sat, 2 Jan 2021 10:00:00 GMT"):
    return json.dumps(
        {
            "id": arxiv_id,
            "title": f"Title {arxiv_id}",
            "authors": "A and B",
            "doi": doi,
            "journal-ref": journal_ref,
            "categories": category,
            "versions": [
                {"version": f"v{i + 1}", "created": created} for i in range(versions)
            ],
        }
    )


class TestFieldTaxonomy:
    @pytest.mark.parametrize(
        "category,field",
        [
            ("cs.LG", "Computer Science"),
            ("cmp-lg/9404002".split("/")[0], "Computer Science"),
            ("math.CO", "Mathematics"),
            ("alg-geom", "Mathematics"),
            ("hep-th", "Physics"),
            ("astro-ph.GA", "Physics"),
            ("quant-ph", "Physics"),
            ("q-bio.BM", "Quantitative Biology"),
            ("q-fin.ST", "Quantitative Finance"),
            ("stat.ML", "Statistics"),
            ("eess.IV", "Electrical Engineering and Systems Science"),
            ("econ.EM", "Economics"),
            ("chao-dyn", "Physics"),
        ],
    )
    def test_mapping(self, category, field):
        assert field_for_category(category) == field


class TestSnapshotStats:
    def test_three_record_toy(self):
        lines = [
            record("1", doi="10.1/a"),
            record("2", journal_ref="J. 5 (2020)"),
            record("3"),
        ]
        stats = compute_snapshot_stats(lines)
        cs = stats.per_field["Computer Science"]
        assert cs.preprint_count == 3
        assert cs.count_without_publication_info == 1
        assert cs.ratio_without_info == pytest.approx(1 / 3)

    def test_empty_snapshot(self):
        stats = compute_snapshot_stats([])
        assert stats.overall.preprint_count == 0
        assert stats.per_field == {}
        assert stats.malformed_count == 0

    def test_single_field_equals_overall(self):
        lines = [record(str(i), versions=i + 1) for i in range(4)]
        stats = compute_snapshot_stats(lines)
        only = stats.per_field["Computer Science"]
        assert only == stats.overall or (
            only.preprint_count == stats.overall.preprint_count
            and only.count_without_publication_info == stats.overall.count_without_publication_info
            and only.version_total == stats.overall.version_total
        )
        assert stats.overall.mean_version_count == pytest.approx((1 + 2 + 3 + 4) / 4)

    def test_partition_sums_to_overall(self):
        lines = [
            record("1", category="cs.LG"),
            record("2", category="math.CO"),
            record("3", category="hep-th", doi="10.1/x"),
            record("4", category="stat.ML"),
        ]
        stats = compute_snapshot_stats(lines)
        assert sum(f.preprint_count for f in stats.per_field.values()) == stats.overall.preprint_count
        assert (
            sum(f.count_without_publication_info for f in stats.per_field.values())
            == stats.overall.count_without_publication_info
        )

    def test_malformed_lines_skipped_and_counted(self):
        lines = [record("1"), "{broken json", json.dumps({"no": "id"}), record("2")]
        stats = compute_snapshot_stats(lines)
        assert stats.overall.preprint_count == 2
        assert stats.malformed_count == 2

    def test_order_independence(self):
        rng = random.Random(8)
        lines = [
            record(str(i), category=rng.choice(["cs.LG", "math.CO", "hep-th"]),
                   doi=rng.choice([None, "10.1/x"]), versions=rng.randint(1, 4))
            for i in range(40)
        ]
        forward = compute_snapshot_stats(lines)
        shuffled = lines[:]
        rng.shuffle(shuffled)
        backward = compute_snapshot_stats(shuffled)
        assert forward == backward

    def test_reads_files_too(self, tmp_path):
        path = tmp_path / "snap.jsonl"
        path.write_text("\n".join([record("1"), record("2", doi="10.1/b")]) + "\n", encoding="utf-8")
        stats = compute_snapshot_stats(path)
        assert stats.overall.preprint_count == 2


class TestSampling:
    def _snapshot(self, n_eligible=10, n_other=5):
        lines = []
        for i in range(n_eligible):
            lines.append(record(f"cs{i}", created="Mon, 4 Jan 2021 10:00:00 GMT"))
        for i in range(n_other):
            # ineligible: has a DOI
            lines.append(record(f"pub{i}", doi="10.1/x", created="Mon, 4 Jan 2021 10:00:00 GMT"))
        return lines

    def test_whole_population(self):
        ids = sample_subset(self._snapshot(), "cs", date(2022, 1, 1), 10, seed=1)
        assert sorted(ids) == sorted(f"cs{i}" for i in range(10))

    def test_deterministic_per_seed(self):
        lines = self._snapshot(100, 0)
        first = sample_subset(lines, "cs", date(2022, 1, 1), 50, seed=7)
        second = sample_subset(lines, "cs", date(2022, 1, 1), 50, seed=7)
        assert first == second

    def test_different_seeds_differ(self):
        lines = self._snapshot(100, 0)
        a = sample_subset(lines, "cs", date(2022, 1, 1), 50, seed=1)
        b = sample_subset(lines, "cs", date(2022, 1, 1), 50, seed=2)
        assert a != b

    def test_cutoff_filters_first_submission(self):
        lines = [
            record("old", created="Mon, 4 Jan 2021 10:00:00 GMT"),
            record("new", created="Wed, 5 Jan 2022 10:00:00 GMT"),
        ]
        ids = sample_subset(lines, "cs", date(2022, 1, 1), 1, seed=0)
        assert ids == ["old"]

    def test_population_too_small(self):
        with pytest.raises(PopulationTooSmall):
            sample_subset(self._snapshot(3, 0), "cs", date(2022, 1, 1), 4, seed=0)

    def test_field_name_or_prefix_accepted(self):
        lines = self._snapshot(5, 0)
        by_prefix = sample_subset(lines, "cs", date(2022, 1, 1), 5, seed=3)
        by_name = sample_subset(lines, "Computer Science", date(2022, 1, 1), 5, seed=3)
        assert by_prefix == by_name


BULK_IDS = ["1901.00001", "1905.00005", "2006.00018", "1906.00006", "1908.00008"]


class TestBulkResolve:
    def test_five_id_corpus(self, replay_config):
        resolver = Resolver(replay_config)
        summary = bulk_resolve(BULK_IDS, resolver)
        assert summary.sample_size == 5
        assert summary.overall_resolved == 3
        assert summary.venn == {
            frozenset({SourceDatabase.DBLP}): 1,
            frozenset(SourceDatabase): 1,
            frozenset({SourceDatabase.SEMANTIC_SCHOLAR, SourceDatabase.OPENALEX}): 1,
        }
        assert summary.per_database_resolved == {
            SourceDatabase.DBLP: 2,
            SourceDatabase.CROSSREF_CROSSCITE: 1,
            SourceDatabase.SEMANTIC_SCHOLAR: 2,
            SourceDatabase.OPENALEX: 2,
        }
        assert summary.per_year == {2019: (4, 2), 2020: (1, 1)}
        assert summary.failures == []
        summary.check()

    def test_failed_id_recorded_run_continues(self, replay_config):
        resolver = Resolver(replay_config)
        summary = bulk_resolve(BULK_IDS + ["9999.00000"], resolver)
        assert summary.sample_size == 6
        assert summary.overall_resolved == 3
        assert len(summary.failures) == 1
        assert summary.failures[0][0] == "9999.00000"

    def test_check_catches_inconsistency(self):
        summary = BulkRunSummary(sample_size=2, overall_resolved=1)
        summary.venn = {}
        with pytest.raises(AssertionError):
            summary.check()


class TestCsvOutput:
    def _summary(self, replay_config):
        return bulk_resolve(BULK_IDS, Resolver(replay_config))

    def test_summary_csv(self, replay_config, tmp_path):
        path = tmp_path / "summary.csv"
        write_summary_csv(self._summary(replay_config), path)
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["database", "resolved", "ratio"]
        assert rows[1] == ["DBLP", "2", "0.4000"]
        assert rows[-1] == ["Overall", "3", "0.6000"]

    def test_venn_csv_bitmasks(self, replay_config, tmp_path):
        path = tmp_path / "venn.csv"
        write_venn_csv(self._summary(replay_config), path)
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["subset_bitmask", "databases", "count"]
        table = {row[0]: (row[1], row[2]) for row in rows[1:]}
        # DBLP=1, CrossRef=2, S2=4, OpenAlex=8
        assert table["1"] == ("DBLP", "1")
        assert table["12"] == ("SemanticScholar+OpenAlex", "1")
        assert table["15"] == ("DBLP+CrossRef/CrossCite+SemanticScholar+OpenAlex", "1")

    def test_per_year_csv(self, replay_config, tmp_path):
        path = tmp_path / "per_year.csv"
        write_per_year_csv(self._summary(replay_config), path)
        rows = list(csv.reader(path.open()))
        assert rows == [
            ["year", "sample_count", "resolved_count", "rate"],
            ["2019", "4", "2", "0.5000"],
            ["2020", "1", "1", "1.0000"],
        ]

    def test_stats_csv(self, tmp_path):
        lines = [record("1", doi="10.1/a"), record("2"), record("3", category="math.CO")]
        path = tmp_path / "stats.csv"
        write_stats_csv(compute_snapshot_stats(lines), path)
        rows = list(csv.reader(path.open()))
        assert rows[0] == ["field", "count", "count_without_info", "ratio", "mean_versions"]
        assert ["Mathematics", "1", "1", "1.0000", "1.00"] in rows
        assert ["Computer Science", "2", "1", "0.5000", "1.00"] in rows
        assert rows[-1][0] == "Overall"


class TestHarnessCli:
    def test_stats_command_writes_csv_and_figure(self, tmp_path, capsys):
        from arxpub.cli import main

        snapshot = tmp_path / "snap.jsonl"
        snapshot.write_text(
            "\n".join([record("1"), record("2", doi="10.1/x"), record("3", category="math.CO")]),
            encoding="utf-8",
        )
        out_dir = tmp_path / "reports"
        code = main(["stats", str(snapshot), "--out", str(out_dir)])
        assert code == 0
        assert (out_dir / "stats.csv").exists()
        assert (out_dir / "stats.png").exists()

    def test_sample_command_stdout(self, tmp_path, capsys):
        from arxpub.cli import main

        snapshot = tmp_path / "snap.jsonl"
        snapshot.write_text(
            "\n".join(record(f"cs{i}", created="Mon, 4 Jan 2021 10:00:00 GMT") for i in range(6)),
            encoding="utf-8",
        )
        code = main([
            "sample", str(snapshot), "--field", "cs", "--before", "2022-01-01",
            "--n", "3", "--seed", "5",
        ])
        assert code == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 3 and all(line.startswith("cs") for line in out)

    def test_bulk_command_writes_everything(self, corpus_dir, tmp_path, capsys):
        from arxpub.cli import main

        ids_file = tmp_path / "ids.txt"
        ids_file.write_text("\n".join(BULK_IDS) + "\n", encoding="utf-8")
        out_dir = tmp_path / "reports"
        code = main([
            "bulk", str(ids_file), "--fixtures", str(corpus_dir),
            "--out", str(out_dir), "--delay", "0",
        ])
        assert code == 0
        for name in ("summary.csv", "venn.csv", "per_year.csv", "venn.png", "per_year.png"):
            assert (out_dir / name).exists(), name
        assert "resolved 3/5" in capsys.readouterr().out
