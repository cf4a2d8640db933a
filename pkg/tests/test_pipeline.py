"""End-to-end resolution over the replay corpus: every scenario's report
must equal its hand-computed expectation, with no provider errors (a
provider error in replay mode means a request had no fixture, i.e. a
cascade violation)."""

import pytest

from corpus import CORPUS

from arxpub.model import DiscoveryKind, FilterOutcome, FilterRule, SourceDatabase
from arxpub.resolver import Resolver

DB_BY_KEY = {db.key: db for db in SourceDatabase}


@pytest.fixture(scope="module")
def outcomes(replay_config_module):
    resolver = Resolver(replay_config_module)
    return {scenario.arxiv_id: resolver.resolve_input(scenario.arxiv_id) for scenario in CORPUS}


@pytest.fixture(scope="module")
def replay_config_module(corpus_dir):
    from arxpub.config import ResolverConfig

    return ResolverConfig(fixtures_dir=corpus_dir, retry_base_delay=0.0)


@pytest.mark.parametrize("scenario", CORPUS, ids=lambda s: s.arxiv_id)
def test_scenario(scenario, outcomes):
    outcome = outcomes[scenario.arxiv_id]
    report = outcome.report

    for result in outcome.provider_results:
        assert result.errors_encountered == (), (
            scenario.arxiv_id, result.source.key, result.errors_encountered
        )

    assert report.resolved is scenario.expect_resolved, scenario.arxiv_id

    for db in SourceDatabase:
        expected_titles = scenario.expect_accepted.get(db.key, [])
        actual_titles = [c.title for c in report.per_database[db]]
        assert actual_titles == expected_titles, (scenario.arxiv_id, db.key)

    for db_key, rule_name in scenario.expect_rules:
        rule = FilterRule[rule_name]
        matching = [
            d for d in report.trace
            if d.rule is rule and d.detail.startswith(f"{db_key}:")
        ]
        assert matching, (scenario.arxiv_id, db_key, rule_name)

    for db_key, (kind_name, step) in scenario.expect_discovery.items():
        candidates = report.per_database[DB_BY_KEY[db_key]]
        assert candidates, (scenario.arxiv_id, db_key)
        for candidate in candidates:
            assert candidate.discovery.kind is DiscoveryKind[kind_name]
            assert candidate.discovery.cascade_step == step

    for db_key, count in scenario.expect_accept_trace.items():
        accepted_decisions = [
            d for d in report.trace
            if d.outcome is FilterOutcome.ACCEPTED and d.detail.startswith(f"{db_key}:")
        ]
        assert len(accepted_decisions) == count, (scenario.arxiv_id, db_key)

    contributing = frozenset(db.key for db in SourceDatabase if report.per_database[db])
    assert contributing == scenario.expect_venn, scenario.arxiv_id

    assert report.preprint.published_date.year == scenario.expect_year


def test_weak_mode_assigned_to_direct_arxiv_results(outcomes):
    from arxpub.model import FilterMode

    for scenario in CORPUS:
        for result in outcomes[scenario.arxiv_id].provider_results:
            if result.candidates:
                all_direct = all(
                    c.discovery.kind is DiscoveryKind.DIRECT_ARXIV_ID for c in result.candidates
                )
                assert (result.filter_mode is FilterMode.WEAK) == all_direct


def test_every_accepted_candidate_appears_in_exactly_one_list(outcomes):
    for scenario in CORPUS:
        report = outcomes[scenario.arxiv_id].report
        seen = set()
        for db in SourceDatabase:
            for candidate in report.per_database[db]:
                assert candidate.source is db
                assert id(candidate) not in seen
                seen.add(id(candidate))
