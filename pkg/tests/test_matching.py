import random
import string

import pytest

from conftest import make_candidate, make_preprint
from oracles import levenshtein_oracle, title_ratio_oracle

from arxpub.errors import DegenerateTitle
from arxpub.matching import (
    MatchThresholds,
    author_match,
    resolve,
    strong_filter,
    title_match,
    weak_filter,
)
from arxpub.model import (
    DiscoveryKind,
    FilterOutcome,
    FilterRule,
    PersonName,
    SourceDatabase,
)
from arxpub.providers import ProviderResult

T = MatchThresholds()


def names(*full):
    return [PersonName.from_full(n) for n in full]


class TestThresholds:
    def test_defaults(self):
        assert T.title_ratio_max == 0.05
        assert T.author_ratio_min == 0.70

    def test_validation(self):
        with pytest.raises(ValueError):
            MatchThresholds(title_ratio_max=1.5)
        with pytest.raises(ValueError):
            MatchThresholds(author_ratio_min=-0.1)


class TestTitleMatch:
    def test_identical(self):
        decision = title_match("Deep Learning", "Deep Learning", T)
        assert decision.accepted and decision.ratio == 0.0

    def test_case_and_whitespace_normalized(self):
        decision = title_match("Deep  Learning", "deep\nlearning", T)
        assert decision.accepted and decision.ratio == 0.0

    def test_single_char_on_short_title_rejects(self):
        # distance 1, max length 13 -> 1/13 ~ 0.0769 >= 0.05
        decision = title_match("deep learning", "deep learnin", T)
        assert decision.ratio == pytest.approx(1 / 13)
        assert decision.ratio == pytest.approx(title_ratio_oracle("deep learning", "deep learnin"))
        assert not decision.accepted

    def test_four_substitutions_on_hundred_chars_accepts(self):
        rng = random.Random(5)
        base = "".join(rng.choice(string.ascii_lowercase) for _ in range(100))
        mutated = list(base)
        for position in (3, 30, 60, 90):
            mutated[position] = "#"
        mutated = "".join(mutated)
        assert levenshtein_oracle(base, mutated) == 4
        decision = title_match(base, mutated, T)
        assert decision.ratio == pytest.approx(0.04)
        assert decision.accepted

    def test_symmetry(self):
        rng = random.Random(11)
        for _ in range(200):
            a = "".join(rng.choice("abcd ") for _ in range(rng.randint(1, 20))) or "a"
            b = "".join(rng.choice("abcd ") for _ in range(rng.randint(1, 20))) or "b"
            if not a.strip() or not b.strip():
                continue
            assert title_match(a, b, T) == title_match(b, a, T)

    def test_degenerate_title(self):
        with pytest.raises(DegenerateTitle):
            title_match("   ", "x", T)


class TestAuthorMatch:
    def test_three_of_four(self):
        decision = author_match(
            names("A Smith", "B Jones", "C Lee"),
            names("A Smith", "B Jones", "C Lee", "D Wu"),
            T,
        )
        assert decision.ratio == pytest.approx(0.75)
        assert decision.accepted

    def test_diacritics_fold_to_match(self):
        decision = author_match(names("Anna Müller"), names("Anna Muller"), T)
        assert decision.ratio == 1.0 and decision.accepted

    def test_exact_boundary_rejected(self):
        mine = names(*[f"X{i} Name{i}" for i in range(10)])
        theirs = names(*[f"X{i} Name{i}" for i in range(7)], "P Q", "R S", "T U")
        decision = author_match(mine, theirs, T)
        assert decision.ratio == pytest.approx(0.70)
        assert not decision.accepted  # strictly greater than required

    def test_empty_candidates_reject(self):
        decision = author_match(names("A B"), [], T)
        assert decision.ratio == 0.0 and not decision.accepted

    def test_duplicate_surnames_not_double_counted(self):
        decision = author_match(
            names("A Kim", "B Kim"), names("C Kim"), T
        )
        # one candidate Kim can absorb only one of the two
        assert decision.ratio == pytest.approx(0.5)

    def test_symmetry_of_ratio(self):
        a = names("A Kim", "B Lee", "C Park")
        b = names("D Kim", "E Lee")
        assert author_match(a, b, T).ratio == author_match(b, a, T).ratio


class TestWeakFilter:
    def test_self_match_arxiv_venue_and_doi(self):
        preprint = make_preprint()
        candidate = make_candidate(venue="arXiv.org", doi="10.48550/arXiv.2101.00001")
        accepted, trace = weak_filter(preprint, [candidate])
        assert accepted == []
        assert trace[0].rule is FilterRule.SELF_MATCH

    def test_self_match_corr_venue(self):
        accepted, trace = weak_filter(
            make_preprint(), [make_candidate(venue="CoRR abs/2101.00001", doi=None)]
        )
        assert trace[0].rule is FilterRule.SELF_MATCH

    def test_self_match_sole_arxiv_external_id(self):
        candidate = make_candidate(
            doi=None, venue="Somewhere", external={"ArXiv": "2101.00001", "CorpusId": "1"}
        )
        accepted, trace = weak_filter(make_preprint(), [candidate])
        assert trace[0].rule is FilterRule.SELF_MATCH

    def test_external_arxiv_id_with_publication_identity_survives(self):
        candidate = make_candidate(
            doi=None, venue="ICML", external={"ArXiv": "2101.00001", "DBLP": "conf/icml/1"}
        )
        accepted, _ = weak_filter(make_preprint(), [candidate])
        assert accepted == [candidate]

    def test_missing_type_and_venue(self):
        candidate = make_candidate(venue=None, journal=None, types=())
        accepted, trace = weak_filter(make_preprint(), [candidate])
        assert accepted == []
        assert trace[0].rule is FilterRule.MISSING_TYPE_OR_VENUE

    def test_venue_alone_is_enough(self):
        candidate = make_candidate(venue="ICML", types=())
        accepted, _ = weak_filter(make_preprint(), [candidate])
        assert accepted == [candidate]

    def test_doi_mismatch(self):
        preprint = make_preprint(doi="10.1000/x")
        candidate = make_candidate(doi="10.2000/y")
        accepted, trace = weak_filter(preprint, [candidate])
        assert accepted == []
        assert trace[0].rule is FilterRule.DOI_MISMATCH

    def test_doi_case_insensitive_equality_accepts(self):
        preprint = make_preprint(doi="10.1000/x")
        candidate = make_candidate(doi="10.1000/X")
        accepted, trace = weak_filter(preprint, [candidate])
        assert accepted == [candidate]
        assert trace[0].outcome is FilterOutcome.ACCEPTED

    def test_missing_doi_on_either_side_is_not_a_mismatch(self):
        preprint = make_preprint(doi=None)
        candidate = make_candidate(doi="10.2000/y")
        accepted, _ = weak_filter(preprint, [candidate])
        assert accepted == [candidate]


class TestStrongFilter:
    def test_all_pass_records_ratios(self):
        preprint = make_preprint()
        candidate = make_candidate()
        accepted, trace = strong_filter(preprint, [candidate], T)
        assert accepted == [candidate]
        assert "title_ratio=0.0000" in trace[0].detail
        assert "author_ratio=1.0000" in trace[0].detail

    def test_title_rejection_short_circuits_author_check(self):
        preprint = make_preprint(title="A Completely Different Headline")
        candidate = make_candidate(title="Nothing Like The Preprint At All")
        accepted, trace = strong_filter(preprint, [candidate], T)
        assert accepted == []
        assert trace[0].rule is FilterRule.TITLE_DISTANCE

    def test_author_rejection(self):
        preprint = make_preprint(authors=("A Aa", "B Bb", "C Cc", "D Dd"))
        candidate = make_candidate(authors=("A Aa", "B Bb", "X Xx", "Y Yy"))
        accepted, trace = strong_filter(preprint, [candidate], T)
        assert accepted == []
        assert trace[0].rule is FilterRule.AUTHOR_RATIO
        assert "0.5000" in trace[0].detail

    def test_weak_rules_precede_fuzzy_rules(self):
        preprint = make_preprint(doi="10.1/a")
        candidate = make_candidate(doi="10.9/z")  # identical title and authors
        _, trace = strong_filter(preprint, [candidate], T)
        assert trace[0].rule is FilterRule.DOI_MISMATCH


def _random_candidate(rng):
    kind = rng.choice(list(DiscoveryKind))
    titles = ["Alpha Beta Gamma", "Alpha Beta Gamma Delta", "Something Else Entirely"]
    venues = [None, "ICML", "arXiv.org", "CoRR"]
    dois = [None, "10.1/a", "10.2/b", "10.48550/arXiv.1"]
    author_pool = ["A Adams", "B Brown", "C Clark", "D Davis", "E Evans"]
    rng.shuffle(author_pool)
    return make_candidate(
        kind=kind,
        step=1,
        title=rng.choice(titles),
        authors=tuple(author_pool[: rng.randint(0, 4)]) or ("A Adams",),
        doi=rng.choice(dois),
        venue=rng.choice(venues),
        types=rng.choice([(), ("Conference and Workshop Papers",), ("JournalArticle",)]),
        external=rng.choice([{}, {"ArXiv": "2101.00001"}, {"ArXiv": "2101.00001", "DOI": "10.1/a"}]),
    )


class TestSubsetAndMonotonicity:
    def test_strong_survivors_subset_of_weak(self):
        rng = random.Random(99)
        preprint = make_preprint(
            title="Alpha Beta Gamma", authors=("A Adams", "B Brown", "C Clark"), doi="10.1/a"
        )
        for _ in range(500):
            candidates = [_random_candidate(rng) for _ in range(rng.randint(0, 6))]
            weak_accepted, _ = weak_filter(preprint, candidates)
            strong_accepted, _ = strong_filter(preprint, candidates, T)
            assert set(map(id, strong_accepted)) <= set(map(id, weak_accepted))

    def test_title_threshold_monotonicity(self):
        preprint = make_preprint(title="Alpha Beta Gamma Delta Epsilon")
        candidates = [
            make_candidate(title="Alpha Beta Gamma Delta Epsilon"),
            make_candidate(title="Alpha Beta Gamma Delta Epsilons"),
            make_candidate(title="Alpha Beta Gamma Delta Different"),
        ]
        sizes = []
        for cutoff in (0.01, 0.05, 0.2, 0.8):
            accepted, _ = strong_filter(preprint, candidates, MatchThresholds(title_ratio_max=cutoff))
            sizes.append(len(accepted))
        assert sizes == sorted(sizes)

    def test_author_threshold_monotonicity(self):
        preprint = make_preprint(authors=("A Aa", "B Bb", "C Cc", "D Dd"))
        candidates = [
            make_candidate(authors=("A Aa", "B Bb", "C Cc", "D Dd")),
            make_candidate(authors=("A Aa", "B Bb", "C Cc", "Z Zz")),
            make_candidate(authors=("A Aa", "Z Zz", "Y Yy", "X Xx")),
        ]
        sizes = []
        for cutoff in (0.9, 0.7, 0.3, 0.1):
            accepted, _ = strong_filter(preprint, candidates, MatchThresholds(author_ratio_min=cutoff))
            sizes.append(len(accepted))
        assert sizes == sorted(sizes)


class TestResolve:
    def _results(self, **by_db):
        out = []
        for db in SourceDatabase:
            out.append(ProviderResult.build(db, by_db.get(db.key, ())))
        return out

    def test_empty_everywhere(self):
        report = resolve(make_preprint(), self._results(), T)
        assert report.resolved is False
        assert report.trace == ()

    def test_weak_mode_keeps_changed_title(self):
        candidate = make_candidate(
            source=SourceDatabase.SEMANTIC_SCHOLAR,
            kind=DiscoveryKind.DIRECT_ARXIV_ID,
            title="A Renamed Publication Title",
            venue="ICLR",
            external={"ArXiv": "2101.00001", "DOI": "10.5/x"},
        )
        report = resolve(make_preprint(doi=None), self._results(semantic_scholar=[candidate]), T)
        assert report.resolved is True
        assert report.per_database[SourceDatabase.SEMANTIC_SCHOLAR] == (candidate,)

    def test_same_doi_in_two_databases_kept_in_both(self):
        a = make_candidate(source=SourceDatabase.DBLP, doi="10.1/same")
        b = make_candidate(source=SourceDatabase.OPENALEX, doi="10.1/same")
        report = resolve(make_preprint(), self._results(dblp=[a], openalex=[b]), T)
        assert report.per_database[SourceDatabase.DBLP] == (a,)
        assert report.per_database[SourceDatabase.OPENALEX] == (b,)

    def test_requires_enum_order(self):
        results = self._results()
        with pytest.raises(ValueError):
            resolve(make_preprint(), list(reversed(results)), T)

    def test_determinism(self):
        candidates = [make_candidate(), make_candidate(title="A Sample Title", doi="10.1/b")]
        results = self._results(dblp=candidates)
        first = resolve(make_preprint(), results, T)
        second = resolve(make_preprint(), results, T)
        assert first.per_database == second.per_database
        assert first.trace == second.trace
