"""Tests for CLI"""

import json
import logging
from pathlib import Path

import pytest
from typer.testing import CliRunner

from incoherify.cli import app
from incoherify.config import BaselinePrimitive
from incoherify.dialogue import Label, load_corpus
from incoherify.proxy import MAGIC

runner = CliRunner()


@pytest.fixture(autouse=True)
def _workdir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    # every command writes incoherify.log to the working directory and adds root handlers
    monkeypatch.chdir(tmp_path)
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def _invoke(*args: str):
    result = runner.invoke(app, [str(a) for a in args])
    assert result.exit_code == 0, result.output
    return result


def _example_corpus(tmp_path: Path, n: int = 10) -> Path:
    path = tmp_path / "corpus.jsonl"
    _invoke("example-data", "--out", path, "--n", n, "--seed", 1)
    return path


def _dataset(tmp_path: Path, n: int = 10) -> Path:
    path = tmp_path / "dataset.jsonl"
    _invoke("gen-dataset", "--in", _example_corpus(tmp_path, n), "--out", path, "--seed", 2)
    return path


class TestVersionOption:
    def test_prints_version_and_exits_cleanly(self):
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert "incoherify" in result.output


class TestUsageErrors:
    def test_unknown_command(self):
        assert runner.invoke(app, ["frobnicate"]).exit_code == 2

    def test_missing_input_file(self, tmp_path: Path):
        result = runner.invoke(
            app, ["manipulate", "--in", str(tmp_path / "absent.jsonl"), "--out", "x.jsonl"]
        )
        assert result.exit_code == 2

    def test_invalid_config(self, tmp_path: Path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"proxy": {"dim": 3}}), encoding="utf-8")
        result = runner.invoke(
            app,
            [
                "manipulate",
                "--in",
                str(_example_corpus(tmp_path)),
                "--out",
                "out.jsonl",
                "--config",
                str(config),
            ],
        )
        assert result.exit_code == 2


class TestValidateCommand:
    def test_example_data_is_valid(self, tmp_path: Path):
        result = _invoke("validate", _example_corpus(tmp_path))
        assert "is valid" in result.output

    def test_reports_bad_lines(self, tmp_path: Path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"id": "a", "utterances": [{"speaker": "A", "amr": "(x / y"}]}\n{not json\n',
            encoding="utf-8",
        )
        result = runner.invoke(app, ["validate", str(path)])
        assert result.exit_code == 1
        assert result.output.count("error") >= 2


class TestManipulateCommand:
    def test_is_deterministic(self, tmp_path: Path):
        corpus = _example_corpus(tmp_path)
        for name in ("a.jsonl", "b.jsonl"):
            _invoke("manipulate", "--in", corpus, "--out", tmp_path / name, "--seed", 7)
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
        manipulated = load_corpus(tmp_path / "a.jsonl")
        assert all(c.label == Label.INCOHERENT for c in manipulated)

    @pytest.mark.parametrize("command", ["manipulate", "gen-dataset"])
    def test_bad_last_line_leaves_no_output(self, tmp_path: Path, command: str):
        corpus = _example_corpus(tmp_path)
        with corpus.open("a", encoding="utf-8") as f:
            f.write("{not json\n")
        out = tmp_path / "out.jsonl"
        result = runner.invoke(app, [command, "--in", str(corpus), "--out", str(out)])
        assert result.exit_code == 1
        assert not out.exists()
        assert not list(tmp_path.glob(".out.jsonl*"))

    def test_baseline_mode_with_workers(self, tmp_path: Path):
        corpus = _example_corpus(tmp_path)
        out = tmp_path / "baseline.jsonl"
        _invoke("manipulate", "--in", corpus, "--out", out, "--mode", "baseline", "-j", 2)
        assert len(load_corpus(out)) == len(load_corpus(corpus))


class TestGenDatasetCommand:
    def test_writes_pairs(self, tmp_path: Path):
        dataset = load_corpus(_dataset(tmp_path, n=6))
        assert len(dataset) == 14
        assert sum(c.label == Label.COHERENT for c in dataset) == 7

    def test_output_does_not_depend_on_jobs(self, tmp_path: Path):
        corpus = _example_corpus(tmp_path, n=20)
        # nothing semantic applies to two one-word turns by different speakers
        inert = {
            "id": "inert",
            "utterances": [
                {"speaker": "A", "amr": "(s / sleep-01)"},
                {"speaker": "B", "amr": "(s / sleep-01)"},
            ],
        }
        with corpus.open("a", encoding="utf-8") as f:
            f.write(json.dumps(inert) + "\n")
        for jobs in (1, 8):
            out = tmp_path / f"jobs{jobs}.jsonl"
            _invoke("gen-dataset", "--in", corpus, "--out", out, "--seed", 4, "-j", jobs)
        assert (tmp_path / "jobs1.jsonl").read_bytes() == (tmp_path / "jobs8.jsonl").read_bytes()

        dataset = {c.id: c for c in load_corpus(tmp_path / "jobs8.jsonl")}
        assert len(dataset) == 2 * 22
        fallback = dataset["inert::neg"]
        assert fallback.label == Label.INCOHERENT
        assert set(fallback.record.names) <= {str(p) for p in BaselinePrimitive}


class TestProxyCommands:
    def test_train_score_and_correlate(self, tmp_path: Path):
        dataset = _dataset(tmp_path)
        model = tmp_path / "proxy.bin"
        _invoke("train-proxy", "--in", dataset, "--out", model, "--seed", 3)
        assert model.read_bytes().startswith(MAGIC)

        ids = [c.id for c in load_corpus(dataset)]
        annotations = tmp_path / "human.tsv"
        annotations.write_text(
            "conversation_id\thuman_scores\n"
            + "".join(
                f"{cid}\t{'2,2,1' if i % 2 == 0 else '0,1'}\n" for i, cid in enumerate(ids)
            ),
            encoding="utf-8",
        )
        scores = tmp_path / "scores.tsv"
        _invoke(
            "score",
            "--model",
            model,
            "--in",
            dataset,
            "--out",
            scores,
            "-a",
            annotations,
            "-b",
            "fed",
        )
        assert len(scores.read_text(encoding="utf-8").splitlines()) == len(ids) + 1

        report = tmp_path / "report.tsv"
        _invoke("eval-corr", "--scores", scores, "--out", report)
        header, row = report.read_text(encoding="utf-8").splitlines()
        assert header.split("\t") == ["aspect", "n", "spearman"]
        assert row.startswith(f"coherence\t{len(ids)}\t")

    def test_score_without_annotations(self, tmp_path: Path):
        dataset = _dataset(tmp_path)
        model = tmp_path / "proxy.bin"
        _invoke("train-proxy", "--in", dataset, "--out", model)
        scores = tmp_path / "scores.tsv"
        _invoke("score", "--model", model, "--in", dataset, "--out", scores)
        assert scores.read_text(encoding="utf-8").startswith("conversation_id\tmodel_score")

    def test_single_class_training_data(self, tmp_path: Path):
        result = runner.invoke(
            app, ["train-proxy", "--in", str(_example_corpus(tmp_path)), "--out", "m.bin"]
        )
        assert result.exit_code == 1

    def test_bad_model_file(self, tmp_path: Path):
        bad = tmp_path / "bad.bin"
        bad.write_bytes(b"not a model at all")
        result = runner.invoke(
            app,
            ["score", "--model", str(bad), "--in", str(_dataset(tmp_path)), "--out", "s.tsv"],
        )
        assert result.exit_code == 1


class TestCrossMatrixCommand:
    def test_writes_matrix_and_plot(self, tmp_path: Path):
        dataset = _dataset(tmp_path)
        out, plot = tmp_path / "matrix.tsv", tmp_path / "matrix.png"
        _invoke(
            "cross-matrix",
            "--train",
            f"semantic={dataset}",
            "--test",
            f"semantic={dataset}",
            "--test",
            f"again={dataset}",
            "--out",
            out,
            "--plot",
            plot,
        )
        header = out.read_text(encoding="utf-8").splitlines()[0]
        assert header.split("\t") == ["train", "semantic", "again"]
        assert plot.read_bytes().startswith(b"\x89PNG")

    @pytest.mark.parametrize("argument", ["no-equals-sign", "=file.jsonl", "name=absent.jsonl"])
    def test_bad_dataset_argument(self, tmp_path: Path, argument: str):
        dataset = _dataset(tmp_path)
        result = runner.invoke(
            app,
            ["cross-matrix", "--train", argument, "--test", f"x={dataset}", "--out", "m.tsv"],
        )
        assert result.exit_code == 2

    def test_test_set_cannot_take_the_row_column_name(self, tmp_path: Path):
        data = _dataset(tmp_path)
        result = runner.invoke(
            app, ["cross-matrix", "--train", f"x={data}", "--test", f"train={data}", "-o", "m.tsv"]
        )
        assert result.exit_code == 2


class TestStatsCommand:
    def test_writes_a_table(self, tmp_path: Path):
        out = tmp_path / "stats.tsv"
        _invoke("stats", "--in", _dataset(tmp_path, n=4), "--out", out)
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].split("\t") == [
            "split",
            "size",
            "mean_conversation_length",
            "mean_utterance_length",
        ]
        assert [line.split("\t")[:2] for line in lines[1:]] == [
            ["all", "10"],
            ["coherent", "5"],
            ["incoherent", "5"],
        ]


class TestExampleDataCommand:
    def test_counts(self, tmp_path: Path):
        path = _example_corpus(tmp_path, n=5)
        assert len(path.read_text(encoding="utf-8").splitlines()) == 6
