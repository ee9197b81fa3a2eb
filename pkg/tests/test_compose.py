"""Tests for composing manipulations, baseline mixes and replay."""

import io
from collections import Counter

import pytest

from incoherify.amr import serialize
from incoherify.config import BaselineConfig, Manipulation, ManipulationConfig
from incoherify.dialogue import Conversation, Label, Utterance, read_corpus, write_corpus
from incoherify.errors import NotApplicableError
from incoherify.examples import make_example_corpus, worked_example
from incoherify.manipulate import (
    Rng,
    apply_baseline,
    apply_pipeline,
    conversation_seed,
    draw_plan,
    replay,
)

CONFIG = ManipulationConfig()


def _inert() -> Conversation:
    return Conversation(
        id="inert",
        label=Label.COHERENT,
        utterances=(Utterance(speaker="A", amr="(s / sleep-01)"),),
    )


class TestDrawPlan:
    def test_order_covers_every_enabled_manipulation(self):
        rng = Rng(0)
        for _ in range(50):
            k, order = draw_plan(rng, CONFIG)
            assert 1 <= k <= 3
            assert sorted(order) == sorted(CONFIG.enabled)

    def test_operation_count_is_uniform(self):
        rng = Rng(123)
        counts = Counter(draw_plan(rng, CONFIG)[0] for _ in range(3000))
        assert set(counts) == {1, 2, 3}
        assert all(0.28 < c / 3000 < 0.39 for c in counts.values())


class TestApplyPipeline:
    def test_labels_and_records(self):
        result, record = apply_pipeline(worked_example(), CONFIG, seed=0)
        assert result.label == Label.INCOHERENT
        assert result.record == record
        assert record.conversation_id == worked_example().id
        assert record.seed == conversation_seed(0, worked_example().id)
        assert 1 <= len(set(record.names)) <= 3

    def test_is_deterministic(self):
        for seed in range(10):
            assert apply_pipeline(worked_example(), CONFIG, seed) == apply_pipeline(
                worked_example(), CONFIG, seed
            )

    def test_seeds_change_the_result(self):
        results = set()
        for seed in range(10):
            result, _ = apply_pipeline(worked_example(), CONFIG, seed)
            results.add(tuple(serialize(u.amr) for u in result.utterances))
        assert len(results) > 1

    def test_replay_reproduces_the_result(self):
        for conversation in make_example_corpus(n=1000, seed=4):
            result, record = apply_pipeline(conversation, CONFIG, seed=9)
            assert replay(conversation, record) == result

    def test_replay_after_a_corpus_round_trip(self):
        original = worked_example()
        result, _ = apply_pipeline(original, CONFIG, seed=5)
        buffer = io.BytesIO()
        write_corpus([result], buffer)
        buffer.seek(0)
        (restored,) = read_corpus(buffer)
        assert replay(original, restored.record) == restored

    def test_ablation_only_uses_enabled_manipulations(self):
        config = ManipulationConfig(enabled=[Manipulation.COREFERENCE], max_ops=1)
        for seed in range(10):
            _, record = apply_pipeline(worked_example(), config, seed)
            assert set(record.names) == {"coreference"}

    def test_nothing_applies(self):
        result, record = apply_pipeline(_inert(), CONFIG, seed=0)
        assert record.steps == ()
        assert result == _inert()

    def test_rejects_incoherent_input(self):
        incoherent = worked_example().model_copy(update={"label": Label.INCOHERENT})
        with pytest.raises(ValueError, match="already labeled incoherent"):
            apply_pipeline(incoherent, CONFIG, seed=0)

    def test_accepts_unlabeled_input(self):
        unlabeled = worked_example().model_copy(update={"label": None})
        result, record = apply_pipeline(unlabeled, CONFIG, seed=0)
        assert record.steps
        assert result.label == Label.INCOHERENT


class TestApplyBaseline:
    def test_records_one_primitive_of_the_mix(self):
        mix = BaselineConfig(mix="shuffling")
        result, record = apply_baseline(worked_example(), [], mix, seed=1)
        (step,) = record.steps
        assert step.name in mix.mix
        assert result.label == Label.INCOHERENT
        assert replay(worked_example(), record) == result

    def test_is_deterministic(self):
        corpus = make_example_corpus(n=5)
        assert apply_baseline(corpus[0], corpus, None, 3) == apply_baseline(
            corpus[0], corpus, None, 3
        )

    def test_nothing_applies(self):
        with pytest.raises(NotApplicableError):
            apply_baseline(_inert(), [_inert()], None, seed=0)
