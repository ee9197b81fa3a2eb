"""Tests for IncoherifyPipeline"""

import pytest
from pydantic import ValidationError

from incoherify.config import BaselineConfig, IncoherifyConfig, ManipulationMode, ProxyConfig
from incoherify.dialogue import Conversation, Label, Utterance, dump_line
from incoherify.errors import SingleClassError
from incoherify.examples import make_example_corpus, worked_example
from incoherify.pipeline import NEGATIVE_SUFFIX, IncoherifyPipeline

CONFIG = IncoherifyConfig(proxy=ProxyConfig(dim=4096, epochs=5))


def _inert(cid: str = "inert") -> Conversation:
    return Conversation(
        id=cid,
        label=Label.COHERENT,
        utterances=(Utterance(speaker="A", amr="(s / sleep-01)"),),
    )


def _dump(conversations) -> list[bytes]:
    return [dump_line(c) for c in conversations]


class TestManipulate:
    def test_every_conversation_becomes_incoherent(self):
        corpus = make_example_corpus(n=8, seed=1)
        result = list(IncoherifyPipeline(config=CONFIG).manipulate(corpus, seed=2))
        assert [c.id for c in result] == [c.id for c in corpus]
        assert all(c.label == Label.INCOHERENT and c.record is not None for c in result)

    def test_output_does_not_depend_on_jobs(self):
        corpus = make_example_corpus(n=12, seed=5)
        serial = IncoherifyPipeline(config=CONFIG, jobs=1).manipulate(corpus, seed=3)
        parallel = IncoherifyPipeline(config=CONFIG, jobs=2, chunk_size=5).manipulate(
            corpus, seed=3
        )
        assert _dump(serial) == _dump(parallel)

    def test_unchanged_when_nothing_applies(self):
        (result,) = IncoherifyPipeline().manipulate([_inert()])
        assert result == _inert()

    def test_incoherent_input_passes_through(self, caplog):
        incoherent = worked_example().model_copy(update={"label": Label.INCOHERENT})
        (result,) = IncoherifyPipeline().manipulate([incoherent])
        assert result == incoherent
        assert "already labeled incoherent" in caplog.text

    def test_baseline_mode(self):
        config = IncoherifyConfig(baseline=BaselineConfig(mix="shuffling"))
        corpus = make_example_corpus(n=4, seed=2)
        result = list(
            IncoherifyPipeline(config=config).manipulate(corpus, ManipulationMode.BASELINE)
        )
        for original, negative in zip(corpus, result, strict=True):
            (step,) = negative.record.steps
            assert step.name in config.baseline.mix
            assert sorted(negative.speakers) == sorted(original.speakers)

    def test_reports_progress(self):
        events = []
        corpus = make_example_corpus(n=3)
        list(IncoherifyPipeline().manipulate(corpus, on_progress=events.append))
        assert [e.detail for e in events] == [c.id for c in corpus]
        assert [e.completed for e in events] == [1, 2, 3, 4]


class TestGenerateDataset:
    def test_pairs_positives_with_negatives(self):
        corpus = make_example_corpus(n=6, seed=9)
        dataset = list(IncoherifyPipeline().generate_dataset(corpus, seed=1))
        assert len(dataset) == 2 * len(corpus)
        assert [c.label for c in dataset] == [Label.COHERENT, Label.INCOHERENT] * len(corpus)
        for positive, negative in zip(dataset[::2], dataset[1::2], strict=True):
            assert negative.id == positive.id + NEGATIVE_SUFFIX
            assert negative.record.conversation_id == positive.id

    def test_skips_incoherent_input(self):
        incoherent = worked_example().model_copy(update={"id": "bad", "label": Label.INCOHERENT})
        dataset = list(IncoherifyPipeline().generate_dataset([incoherent, worked_example()]))
        assert [c.id for c in dataset] == [
            worked_example().id,
            worked_example().id + NEGATIVE_SUFFIX,
        ]

    def test_excludes_conversations_nothing_applies_to(self):
        config = IncoherifyConfig(baseline=BaselineConfig(mix="shuffling"))
        pipeline = IncoherifyPipeline(config=config)
        dataset = list(pipeline.generate_dataset([_inert("a"), _inert("b")]))
        assert dataset == []

    def test_is_deterministic(self):
        corpus = make_example_corpus(n=5, seed=3)
        pipeline = IncoherifyPipeline()
        assert _dump(pipeline.generate_dataset(corpus, seed=4)) == _dump(
            pipeline.generate_dataset(corpus, seed=4)
        )


class TestTrainAndScore:
    def test_scores_in_input_order(self):
        pipeline = IncoherifyPipeline(config=CONFIG)
        dataset = list(pipeline.generate_dataset(make_example_corpus(n=10, seed=6)))
        model = pipeline.train_proxy(dataset)
        scores = pipeline.score(model, dataset)
        assert list(scores) == [c.id for c in dataset]
        assert all(0.0 < s < 1.0 for s in scores.values())

    def test_train_needs_both_labels(self):
        with pytest.raises(SingleClassError):
            IncoherifyPipeline(config=CONFIG).train_proxy(make_example_corpus(n=3))

    def test_cross_matrix_shape(self):
        pipeline = IncoherifyPipeline(config=CONFIG)
        dataset = list(pipeline.generate_dataset(make_example_corpus(n=6, seed=2)))
        matrix = pipeline.cross_matrix({"semantic": dataset}, {"semantic": dataset, "b": dataset})
        assert matrix.shape == (1, 3)
        assert 0.0 <= matrix["b"][0] <= 1.0


class TestOptions:
    def test_jobs_must_be_positive(self):
        with pytest.raises(ValidationError):
            IncoherifyPipeline(jobs=0)
