"""Tests for the AMR-level manipulations."""

import pytest

from incoherify.amr import UNKNOWN, is_predicate_concept, validate
from incoherify.config import CountRange, EngagementStrategy, ManipulationConfig
from incoherify.dialogue import Conversation, Utterance, sentence_units
from incoherify.errors import NotApplicableError
from incoherify.examples import make_example_corpus, worked_example
from incoherify.knowledge import bundled_lexicon
from incoherify.manipulate import (
    Rng,
    contradict,
    coref_inconsistency,
    decrease_engagement,
    harvest_concepts,
    irrelevancy,
)

SEEDS = range(40)


def _conversation(*turns: tuple[str, str]) -> Conversation:
    return Conversation(
        id="small",
        utterances=tuple(Utterance(speaker=speaker, amr=amr) for speaker, amr in turns),
    )


def _all_valid(conversation: Conversation) -> bool:
    return all(validate(u.amr).ok for u in conversation.utterances)


class TestHarvestConcepts:
    def test_collects_predicates_and_argument_nouns(self):
        concepts = harvest_concepts([worked_example()], frozenset({"you", "i", "he"}))
        assert "watch-01" in concepts
        assert "broadcast-program" in concepts
        assert "kid" in concepts
        assert "you" not in concepts
        assert UNKNOWN not in concepts
        assert len(concepts) == len(set(concepts))


class TestContradict:
    def test_copies_units_into_a_later_turn_of_the_same_speaker(self):
        original = worked_example()
        for seed in SEEDS:
            result, steps = contradict(original, bundled_lexicon(), Rng(seed))
            (step,) = steps
            params = step.parameters
            source, target = params.source_index, step.utterance_index
            assert source < target
            assert original.speakers[source] == original.speakers[target]
            assert params.negations
            assert set(params.negations) <= set(params.units)
            before = len(sentence_units(original.utterances[target]))
            assert len(sentence_units(result.utterances[target])) == before + len(params.units)
            untouched = [i for i in range(len(original.utterances)) if i != target]
            assert [result.utterances[i] for i in untouched] == [
                original.utterances[i] for i in untouched
            ]
            assert _all_valid(result)

    def test_prefers_lexicon_antonyms(self):
        conversation = _conversation(
            ("A", "(l / like-01 :ARG0 (ii / i) :ARG1 (m / music))"),
            ("B", "(s / sleep-01 :ARG0 (ii / i))"),
            ("A", "(g / good-02 :ARG1 (ii / i))"),
        )
        for seed in SEEDS:
            result, (step,) = contradict(conversation, bundled_lexicon(), Rng(seed))
            assert step.parameters.negations[1].mode == "antonym"
            assert step.parameters.negations[1].concept == "hate-01"
            assert "hate-01" in result.utterances[2].amr.nodes.values()

    def test_falls_back_to_polarity(self):
        conversation = _conversation(
            ("A", "(z / zoom-01 :ARG0 (ii / i))"),
            ("A", "(s / sleep-01 :ARG0 (ii / i))"),
        )
        result, (step,) = contradict(conversation, bundled_lexicon(), Rng(0))
        assert step.parameters.negations[1].mode == "polarity"
        amr = result.utterances[1].amr
        (copied,) = [v for v, c in amr.nodes.items() if c == "zoom-01"]
        assert amr.has_polarity(copied)

    def test_needs_a_later_turn_by_the_same_speaker(self):
        conversation = _conversation(
            ("A", "(l / like-01 :ARG0 (ii / i))"), ("B", "(l / like-01 :ARG0 (ii / i))")
        )
        with pytest.raises(NotApplicableError):
            contradict(conversation, bundled_lexicon(), Rng(0))


class TestCorefInconsistency:
    def test_only_swaps_argument_pronouns(self):
        original = worked_example()
        pronouns = ManipulationConfig().pronoun_set
        for seed in SEEDS:
            result, steps = coref_inconsistency(original, Rng(seed))
            assert 1 <= sum(len(s.parameters.replacements) for s in steps) <= 3
            for step in steps:
                before = original.utterances[step.utterance_index].amr
                after = result.utterances[step.utterance_index].amr
                assert after.edges == before.edges
                assert len(after.nodes) == len(before.nodes)
                for var, concept in step.parameters.replacements.items():
                    assert before.nodes[var] in pronouns
                    assert concept != before.nodes[var]
                    assert after.nodes[var] == concept

    def test_needs_an_argument_pronoun(self):
        conversation = _conversation(
            ("A", "(w / watch-01 :ARG1 (b / book))"), ("B", "(s / sleep-01)")
        )
        with pytest.raises(NotApplicableError):
            coref_inconsistency(conversation, Rng(0))


class TestIrrelevancy:
    def test_replacements_keep_category_and_structure(self):
        original = worked_example()
        for seed in SEEDS:
            result, steps = irrelevancy(original, Rng(seed))
            assert steps
            for step in steps:
                i = step.utterance_index
                before = original.utterances[i].amr
                after = result.utterances[i].amr
                assert after.edges == before.edges
                elsewhere = {
                    c
                    for j, u in enumerate(original.utterances)
                    if j != i
                    for c in u.amr.nodes.values()
                }
                for var, concept in step.parameters.replacements.items():
                    assert concept in elsewhere
                    assert concept != before.nodes[var]
                    assert is_predicate_concept(concept) == is_predicate_concept(
                        before.nodes[var]
                    )

    def test_cross_conversation_donors(self):
        conversation = _conversation(
            ("A", "(s / sleep-01 :ARG0 (ii / i))"), ("B", "(s / sleep-01 :ARG0 (ii / i))")
        )
        config = ManipulationConfig(
            cross_conversation=True, irrelevancy_count=CountRange(lo=1, hi=1)
        )
        result, (step,) = irrelevancy(conversation, Rng(0), config, donor_pool=["dance-01"])
        assert list(step.parameters.replacements.values()) == ["dance-01"]
        assert "dance-01" in result.utterances[step.utterance_index].amr.nodes.values()

    def test_pooled_pronouns_are_donors_like_local_ones(self):
        conversation = _conversation(
            ("A", "(s / sleep-01 :ARG0 (ii / i))"), ("B", "(s / sleep-01 :ARG0 (ii / i))")
        )
        config = ManipulationConfig(
            cross_conversation=True, irrelevancy_count=CountRange(lo=1, hi=1)
        )
        _, (step,) = irrelevancy(conversation, Rng(0), config, donor_pool=["she"])
        assert step.parameters.replacements == {"ii": "she"}

    def test_needs_two_utterances(self):
        with pytest.raises(NotApplicableError):
            irrelevancy(_conversation(("A", "(s / sleep-01)")), Rng(0))


class TestDecreaseEngagement:
    def test_question_removal(self):
        original = worked_example()
        for seed in SEEDS:
            result, (step,) = decrease_engagement(
                original, Rng(seed), EngagementStrategy.QUESTION
            )
            if len(result.utterances) == 3:
                assert step.parameters.kind == "drop_utterance"
                assert result.utterances == original.utterances[1:]
            else:
                amr = result.utterances[2].amr
                assert "h2" not in amr.nodes
                assert [e.role for e in amr.edges_from("m")] == [":snt1", ":snt2"]

    def test_deepest_cuts_below_the_deepest_parent(self):
        result, (step,) = decrease_engagement(
            worked_example(), Rng(0), EngagementStrategy.DEEPEST
        )
        amr = result.utterances[1].amr
        assert step.parameters.variables == ("h",)
        assert not {"h", "k"} & set(amr.nodes)
        assert "ii" in amr.nodes
        assert validate(amr).ok

    def test_argument_removal(self):
        original = worked_example()
        for seed in SEEDS:
            result, (step,) = decrease_engagement(
                original, Rng(seed), EngagementStrategy.ARGUMENTS
            )
            i = step.utterance_index
            assert 1 <= len(step.parameters.variables) <= 3
            assert len(result.utterances[i].amr.nodes) < len(original.utterances[i].amr.nodes)
            assert _all_valid(result)

    def test_weights_pick_the_strategy(self):
        config = ManipulationConfig(
            engagement_weights={"question": 0.0, "deepest": 1.0, "arguments": 0.0}
        )
        for seed in range(10):
            _, (step,) = decrease_engagement(worked_example(), Rng(seed), config=config)
            assert step.parameters.strategy == "deepest"

    @pytest.mark.parametrize("strategy", [*EngagementStrategy, None])
    def test_nothing_to_remove(self, strategy):
        with pytest.raises(NotApplicableError):
            decrease_engagement(_conversation(("A", "(s / sleep-01)")), Rng(0), strategy)


class TestNodeCounts:
    @pytest.mark.parametrize(
        ("manipulate", "compare"),
        [
            (lambda c, rng: contradict(c, bundled_lexicon(), rng), int.__gt__),
            (coref_inconsistency, int.__eq__),
            (irrelevancy, int.__eq__),
            (decrease_engagement, int.__lt__),
        ],
        ids=["contradiction", "coreference", "irrelevancy", "engagement"],
    )
    def test_synthetic_corpus(self, manipulate, compare):
        applied = 0
        for seed, conversation in enumerate(make_example_corpus(n=1000, seed=11, worked=False)):
            try:
                result, _ = manipulate(conversation, Rng(seed))
            except NotApplicableError:
                continue
            applied += 1
            assert _all_valid(result)
            assert compare(result.node_count(), conversation.node_count())
        assert applied > 900
