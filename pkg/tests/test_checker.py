import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import vote_model, weakened_ready_fixture
from semitop import checker
from semitop import theories as th
from semitop.grammar import parse
from semitop.kernel3 import TruthValue
from semitop.semantics import Model, denote_vector
from semitop.semitopo import from_threshold
from semitop.simulator import RunConfig, extract_model, run
from semitop.theories import Polarity, PropertySchema

F, B, T = TruthValue.F, TruthValue.B, TruthValue.T
VOTE = th.theory("ThyVote")
VOTE_SPACE = from_threshold(4, 3)


@pytest.fixture(scope="module")
def vote_models():
    return [m for m in checker.enumerate_models(VOTE_SPACE, ("u",), VOTE.predicates)]


class TestCheckTheory:
    def test_unanimous_vote(self):
        report = checker.check_theory(vote_model("TTTT", "TTTT"), VOTE)
        assert report.overall
        assert [v.name for v in report.axioms] == [a.name for a in VOTE.formula_axioms]
        assert report.structural == (("3twined", True),)

    def test_one_dissenting_observation(self):
        report = checker.check_theory(vote_model("TTTT", "TTTF"), VOTE)
        assert not report.overall
        assert "ObserveNeg?" in report.failures()
        bad = report.verdict("ObserveNeg?").failing_instances()
        assert [tv for p, tv in bad[0].values if p == "p3"] == [F]

    def test_structural_failure(self):
        m = vote_model("TTTT", "TTTT", from_threshold(4, 2))
        report = checker.check_theory(m, VOTE)
        assert report.structural == (("3twined", False),)
        assert report.failures() == ["3twined"]

    def test_profile_errors(self):
        with pytest.raises(checker.ProfileError, match="predicates"):
            checker.check_theory(Model(("u",), VOTE_SPACE, {}), VOTE)
        m = Model.build(("0", "1"), VOTE_SPACE, th.theory("ThyCA").predicates, lambda *_: F)
        with pytest.raises(checker.ProfileError, match="value set"):
            checker.check_theory(m, th.theory("ThyCA"))
        with pytest.raises(checker.ProfileError):
            checker.check_properties(vote_model("TTTT", "TTTT"), th.properties("ThyBB"))


class TestProperties:
    def test_agreement_invalid_on_unanimous(self):
        report = checker.check_properties(vote_model("TTTT", "TTTT"), th.properties("vote"), VOTE)
        assert report.overall and report.axioms == ()

    def test_invalid_polarity_fails_when_valid(self):
        m = vote_model("TTTT", "TTFF", from_threshold(4, 2))
        report = checker.check_properties(m, th.properties("vote"))
        assert not report.overall
        assert report.verdict("Agreement").failing_instances()

    def test_honest_bracha(self):
        cfg = RunConfig("bracha", values=("u", "w"), value="u")
        m = extract_model(run(cfg), cfg)
        report = checker.check_properties(m, th.properties("bracha"))
        assert report.overall and len(report.properties) == 5

    def test_domains_restrict_instances(self):
        m = Model.build(th.CRUSADER_VALUES, VOTE_SPACE, th.theory("ThyCA").predicates, lambda *_: F)
        report = checker.check_properties(m, th.properties("crusader"))
        assert len(report.verdict("CaAgree").instances) == 4
        assert len(report.verdict("CaValid1").instances) == 6
        assert [dict(i.bindings) for i in report.verdict("CaValid2").instances] == [{"v": "0"}, {"v": "1"}]


class TestReport:
    def test_json_shape(self):
        report = checker.check_model(vote_model("TTTT", "TTTF"), VOTE, th.properties("vote"),
                                     th.derived_lemmas("vote"))
        data = json.loads(report.to_json())
        assert set(data) == {"model", "theory", "structural", "axioms", "properties", "lemmas",
                             "summary", "overall"}
        assert data["summary"]["lemmas"]["passed"] + data["summary"]["lemmas"]["failed"] == 4
        assert data["axioms"][1]["instances"][0]["values"]["p3"] == "F"
        assert report.to_json() == checker.check_model(
            vote_model("TTTT", "TTTF"), VOTE, th.properties("vote"), th.derived_lemmas("vote")).to_json()

    def test_text(self):
        text = checker.check_theory(vote_model("TTTT", "TTTF"), VOTE).to_text()
        assert "FAIL  axiom ObserveNeg?" in text
        assert text.endswith("overall: FAIL\n")
        assert "PASS  structural 3twined" in text


class TestEnumeration:
    def test_count(self, vote_models):
        assert len(vote_models) == 6561
        assert checker.model_space_size(VOTE_SPACE, ("u",), VOTE.predicates) == 6561

    def test_order(self, vote_models):
        first, second, last = vote_models[0], vote_models[1], vote_models[-1]
        assert set(first.vectors["vote"]["u"] + first.vectors["observe"]["u"]) == {F}
        assert second.vectors["observe"]["u"] == (F, F, F, B)
        assert set(last.vectors["vote"]["u"] + last.vectors["observe"]["u"]) == {T}
        assert len(set(vote_models)) == len(vote_models)

    def test_filter(self, vote_models):
        filtered = list(checker.enumerate_models(VOTE_SPACE, ("u",), VOTE.predicates, filter=VOTE))
        assert vote_model("TTTT", "TTTT") in filtered
        assert filtered == [m for m in vote_models if checker.is_model_of(m, VOTE)]

    def test_filter_on_untwined_space(self):
        assert list(checker.enumerate_models(from_threshold(4, 2), ("u",), VOTE.predicates,
                                             filter=VOTE)) == []

    def test_cap(self, monkeypatch):
        with pytest.raises(checker.CapExceeded) as info:
            next(checker.enumerate_models(VOTE_SPACE, ("u",), VOTE.predicates, cap=100))
        assert (info.value.required, info.value.allowed) == (6561, 100)
        monkeypatch.setenv("SEMITOP_CAP", "50")
        assert checker.default_cap() == 50
        with pytest.raises(checker.CapExceeded):
            next(checker.enumerate_models(VOTE_SPACE, ("u",), VOTE.predicates))
        monkeypatch.setenv("SEMITOP_CAP", "lots")
        with pytest.raises(ValueError):
            checker.default_cap()

    def test_monotone_under_axiom_removal(self, vote_models):
        for name in [a.name for a in VOTE.axioms]:
            weaker = th.without_axiom(VOTE, name)
            for m in vote_models:
                if checker.is_model_of(m, VOTE):
                    assert checker.is_model_of(m, weaker)

    def test_fast_check_agrees_with_report(self, vote_models):
        rng = random.Random(7)
        for m in rng.sample(vote_models, 200):
            assert checker.is_model_of(m, VOTE) == checker.check_theory(m, VOTE).overall
            assert checker.violated_properties(m, th.properties("vote")) == \
                checker.check_properties(m, th.properties("vote")).failures()


class TestEntailment:
    def test_agreement(self):
        result = checker.verify_entailment(VOTE_SPACE, ("u",), VOTE, th.properties("vote"))
        assert result.passed and not result.vacuous
        assert result.models_enumerated == 6561

    def test_lemma(self):
        lemma = PropertySchema("L", parse("[S] observe('u) -> [Q] vote('u)"))
        assert checker.verify_entailment(VOTE_SPACE, ("u",), VOTE, [lemma]).passed

    def test_without_correct(self):
        weaker = th.without_axiom(VOTE, "Correct")
        result = checker.verify_entailment(VOTE_SPACE, ("u",), weaker, th.properties("vote"))
        assert not result.passed and result.violated == ("Agreement",)
        m = result.countermodel
        assert checker.is_model_of(m, weaker)
        assert not checker.check_properties(m, th.properties("vote")).overall

    def test_vacuous(self):
        t = th.replace_axiom(VOTE, "Correct", "bot")
        result = checker.verify_entailment(VOTE_SPACE, ("u",), t, th.properties("vote"))
        assert result.passed and result.vacuous


class TestSearch:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            checker.SearchConfig(mode="magic")
        with pytest.raises(ValueError):
            checker.SearchConfig(budget=-1)
        with pytest.raises(ValueError):
            checker.SearchConfig(seed=2 ** 64)

    def test_exhaustive(self):
        weaker = th.without_axiom(VOTE, "Correct")
        cfg = checker.SearchConfig(mode="exhaustive")
        found = checker.search_counterexample(weaker, th.properties("vote"), cfg)
        assert found.found and found.violated == ("Agreement",)
        none = checker.search_counterexample(VOTE, th.properties("vote"), cfg)
        assert not none.found and none.candidates == 6561 and none.theory_models > 0

    def test_exhaustive_respects_cap(self):
        with pytest.raises(checker.CapExceeded):
            checker.search_counterexample(VOTE, [], checker.SearchConfig(mode="exhaustive", cap=10))

    def test_budget(self):
        cfg = checker.SearchConfig(mode="random", budget=0)
        assert checker.search_counterexample(VOTE, th.properties("vote"), cfg).candidates == 0
        cfg = checker.SearchConfig(mode="random", budget=25)
        assert checker.search_counterexample(VOTE, th.properties("vote"), cfg).candidates == 25

    def test_random_is_reproducible(self):
        weaker = th.without_axiom(VOTE, "Correct")
        runs = [checker.search_counterexample(weaker, th.properties("vote"),
                                              checker.SearchConfig(mode="random", seed=3, budget=3000))
                for _ in range(2)]
        assert runs[0] == runs[1]
        assert runs[0].found

    def test_guided_with_custom_generators(self):
        fixture = weakened_ready_fixture()
        cfg = checker.SearchConfig(budget=5)
        result = checker.search_counterexample(th.weakened_bracha(), th.properties("bracha"), cfg,
                                               generators=[lambda rng: fixture])
        assert result.model == fixture and result.candidates == 1
        assert set(result.violated) >= {"BrIntegrity", "BrConsistency"}
        clean = checker.search_counterexample(th.theory("bracha"), th.properties("bracha"), cfg,
                                              generators=[lambda rng: fixture])
        assert not clean.found and clean.theory_models == 0

    def test_profile_mismatch(self):
        with pytest.raises(checker.ProfileError):
            checker.search_counterexample(VOTE, [], checker.SearchConfig(values=("a", "b")))


@given(st.integers(0, 2 ** 32))
def test_verdicts_survive_spot_recheck(seed):
    rng = random.Random(seed)
    cfg = RunConfig("bracha", byzantine=("p3",), strategy=rng.choice(("equivocate", "random")),
                    seed=seed, values=("u", "w"))
    m = extract_model(run(cfg), cfg)
    report = checker.check_model(m, th.theory("bracha"), th.properties("bracha"), th.derived_lemmas("bracha"))
    instances = [i for v in (*report.axioms, *report.properties, *report.lemmas) for i in v.instances]
    for inst in rng.sample(instances, max(1, len(instances) // 100)):
        vec = denote_vector(m, parse(inst.formula))
        assert (F not in vec) == inst.valid
        assert tuple(tv for _, tv in inst.values) == vec


def test_polarity_rule():
    m = vote_model("TTTT", "TTTT")
    never = PropertySchema("Never", parse("bot"), polarity=Polarity.INVALID)
    always = PropertySchema("Always", parse("!bot"), polarity=Polarity.INVALID)
    report = checker.check_properties(m, [never, always])
    assert report.failures() == ["Always"]
