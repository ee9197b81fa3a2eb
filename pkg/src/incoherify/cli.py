"""
`incoherify` CLI, built on Typer. It is a thin argument-parsing layer over `IncoherifyPipeline`
and the corpus/evaluation readers and writers: every command resolves its arguments then calls
the same functions a Python caller would use directly.

Exit status: 0 on success, 1 when input data fails validation (corpus, AMR, lexicon, model or
score-table errors, single-class datasets), 2 on usage errors (unknown command, missing file,
bad option, invalid config).
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from contextlib import contextmanager
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import polars as pl
import typer
from rich.console import Console
from rich.table import Table

from incoherify.config import IncoherifyConfig, ManipulationMode
from incoherify.dialogue.corpus import iter_corpus, lint_corpus, load_corpus, save_corpus
from incoherify.dialogue.stats import corpus_statistics
from incoherify.errors import ConfigError, IncoherifyError
from incoherify.evaluation import (
    Benchmark,
    attach_annotations,
    correlation_report,
    read_annotations,
    read_score_table,
    render_heatmap,
    write_matrix,
    write_model_scores,
    write_score_table,
)
from incoherify.evaluation.matrix import ROW_HEADER
from incoherify.examples import make_example_data
from incoherify.log import setup_logger
from incoherify.pipeline import IncoherifyPipeline
from incoherify.proxy import load_model, save_model

__all__ = ["app"]

logger = logging.getLogger(__name__)
console = Console()

try:
    VERSION = version("incoherify")
except PackageNotFoundError:
    VERSION = "0.0.0"

app = typer.Typer(
    name="incoherify",
    help="Build incoherent dialogue examples from AMR graphs and evaluate coherence metrics.",
    rich_markup_mode="rich",
    no_args_is_help=True,
)


def version_callback(value: bool):
    if value:
        console.print(f"[bold magenta]incoherify[/bold magenta] [bold white]{VERSION}")
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        False,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit.",
    ),
):
    """
    [bold magenta]incoherify:[/bold magenta] AMR-level manipulations for coherence evaluation.
    """


InputOption = typer.Option(
    ...,
    "--in",
    "-i",
    exists=True,
    dir_okay=False,
    help="Input corpus (one JSON conversation per line).",
)
OutputOption = typer.Option(..., "--out", "-o", dir_okay=False, help="Output file.")
ConfigOption = typer.Option(
    None, "--config", "-c", exists=True, dir_okay=False, help="JSON configuration file."
)
SeedOption = typer.Option(0, "--seed", "-s", min=0, help="Global random seed.")
JobsOption = typer.Option(
    1, "--jobs", "-j", min=1, help="Worker processes; output does not depend on it."
)
BenchmarkOption = typer.Option(
    None, "--benchmark", "-b", help="Check human scores against this benchmark's ranges."
)
VerboseOption = typer.Option(0, "-v", "--verbose", count=True, help="Increase log verbosity.")
QuietOption = typer.Option(0, "--quiet", "-q", count=True, help="Decrease log verbosity.")


def _configure_logging(verbose: int, quiet: int) -> logging.Logger:
    level = logging.INFO - (verbose * 10) + (quiet * 10)
    return setup_logger(level=level)


@contextmanager
def _cli_errors() -> Iterator[None]:
    """Maps config errors to usage errors (exit 2) and other data errors to exit 1."""
    try:
        yield
    except ConfigError as e:
        raise typer.BadParameter(str(e)) from e
    except (IncoherifyError, ValueError) as e:
        console.print(f"[bold red]error:[/bold red] {e}")
        raise typer.Exit(1) from e


def _load_config(path: Path | None) -> IncoherifyConfig:
    try:
        return IncoherifyConfig.load(path)
    except ConfigError as e:
        raise typer.BadParameter(str(e), param_hint="--config") from e


def _with_proxy_seed(config: IncoherifyConfig, seed: int | None) -> IncoherifyConfig:
    if seed is None:
        return config
    return config.model_copy(update={"proxy": config.proxy.model_copy(update={"seed": seed})})


def _cell(value: object) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _print_frame(frame: pl.DataFrame, title: str) -> None:
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(column)
    for row in frame.iter_rows():
        table.add_row(*(_cell(v) for v in row))
    console.print(table)


def _named_paths(values: list[str], option: str) -> dict[str, Path]:
    named: dict[str, Path] = {}
    for value in values:
        name, sep, path = value.partition("=")
        if not sep or not name or not path:
            raise typer.BadParameter(f"{value!r} must look like NAME=FILE", param_hint=option)
        if name in named:
            raise typer.BadParameter(f"dataset name {name!r} given twice", param_hint=option)
        if not Path(path).is_file():
            raise typer.BadParameter(f"no such file: {path}", param_hint=option)
        named[name] = Path(path)
    return named


@app.command(name="validate")
def validate_corpus(
    input_path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Corpus to lint."),
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Check every line of a corpus and report all problems found."""
    _configure_logging(verbose, quiet)
    with input_path.open("rb") as f:
        problems = lint_corpus(f)
    for problem in problems:
        console.print(f"[bold red]error:[/bold red] {problem}")
    if problems:
        raise typer.Exit(1)
    console.print(f"[green]{input_path} is valid[/green]")


@app.command(name="manipulate")
def manipulate(
    input_path: Path = InputOption,
    out: Path = OutputOption,
    mode: ManipulationMode = typer.Option(
        ManipulationMode.SEMANTIC, "--mode", "-m", help="AMR-level or text-level negatives."
    ),
    config: Path | None = ConfigOption,
    seed: int = SeedOption,
    jobs: int = JobsOption,
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Turn every conversation of a corpus into an incoherent one."""
    _configure_logging(verbose, quiet)
    pipeline = IncoherifyPipeline(config=_load_config(config), jobs=jobs)
    with _cli_errors(), input_path.open("rb") as f:
        conversations = (c for _, c in iter_corpus(f))
        save_corpus(pipeline.manipulate(conversations, mode=mode, seed=seed), out)


@app.command(name="gen-dataset")
def gen_dataset(
    input_path: Path = InputOption,
    out: Path = OutputOption,
    config: Path | None = ConfigOption,
    seed: int = SeedOption,
    jobs: int = JobsOption,
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Write a balanced corpus: each conversation followed by its manipulated negative."""
    _configure_logging(verbose, quiet)
    pipeline = IncoherifyPipeline(config=_load_config(config), jobs=jobs)
    with _cli_errors():
        positives = load_corpus(input_path)
        save_corpus(pipeline.generate_dataset(positives, seed=seed), out)


@app.command(name="train-proxy")
def train_proxy(
    input_path: Path = InputOption,
    out: Path = OutputOption,
    config: Path | None = ConfigOption,
    seed: int | None = typer.Option(
        None, "--seed", "-s", min=0, help="Training seed (overrides the config)."
    ),
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Train the proxy coherence classifier on a labeled corpus."""
    _configure_logging(verbose, quiet)
    pipeline = IncoherifyPipeline(config=_with_proxy_seed(_load_config(config), seed))
    with _cli_errors():
        model = pipeline.train_proxy(load_corpus(input_path))
        save_model(model, out)


@app.command(name="score")
def score(
    model: Path = typer.Option(
        ..., "--model", exists=True, dir_okay=False, help="Model written by train-proxy."
    ),
    input_path: Path = InputOption,
    out: Path = OutputOption,
    annotations: Path | None = typer.Option(
        None,
        "--annotations",
        "-a",
        exists=True,
        dir_okay=False,
        help="TSV of human judgments (conversation_id, human_scores, aspect).",
    ),
    benchmark: Benchmark | None = BenchmarkOption,
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Score conversations; with --annotations, write a full score table."""
    _configure_logging(verbose, quiet)
    pipeline = IncoherifyPipeline()
    with _cli_errors(), input_path.open("rb") as f:
        scores = pipeline.score(load_model(model), (c for _, c in iter_corpus(f)))
        if annotations is None:
            write_model_scores(scores, out)
        else:
            table = attach_annotations(scores, read_annotations(annotations), benchmark)
            write_score_table(table, out)


@app.command(name="eval-corr")
def eval_corr(
    scores: Path = typer.Option(
        ..., "--scores", exists=True, dir_okay=False, help="Score table written by score."
    ),
    out: Path | None = typer.Option(None, "--out", "-o", dir_okay=False, help="Report TSV."),
    benchmark: Benchmark | None = BenchmarkOption,
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Spearman correlation between model scores and mean human judgments, per aspect."""
    _configure_logging(verbose, quiet)
    with _cli_errors():
        report = correlation_report(read_score_table(scores, benchmark))
    _print_frame(report, "Spearman correlation")
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        report.write_csv(out, separator="\t")


@app.command(name="cross-matrix")
def cross_matrix(
    train: list[str] = typer.Option(..., "--train", help="Training dataset as NAME=FILE."),
    test: list[str] = typer.Option(..., "--test", help="Test dataset as NAME=FILE."),
    out: Path = OutputOption,
    plot: Path | None = typer.Option(None, "--plot", dir_okay=False, help="Heatmap image."),
    config: Path | None = ConfigOption,
    seed: int | None = typer.Option(
        None, "--seed", "-s", min=0, help="Training seed (overrides the config)."
    ),
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Train on each --train dataset and report accuracy on each --test dataset."""
    _configure_logging(verbose, quiet)
    train_paths = _named_paths(train, "--train")
    test_paths = _named_paths(test, "--test")
    if ROW_HEADER in test_paths:
        raise typer.BadParameter(
            f"{ROW_HEADER!r} names the row column and cannot name a test set", param_hint="--test"
        )
    pipeline = IncoherifyPipeline(config=_with_proxy_seed(_load_config(config), seed))
    with _cli_errors():
        train_sets = {name: load_corpus(path) for name, path in train_paths.items()}
        test_sets = {name: load_corpus(path) for name, path in test_paths.items()}
        matrix = pipeline.cross_matrix(train_sets, test_sets)
    write_matrix(matrix, out)
    _print_frame(matrix, "Accuracy (rows: train, columns: test)")
    if plot is not None:
        render_heatmap(matrix, plot)


@app.command(name="stats")
def stats(
    input_path: Path = InputOption,
    out: Path | None = typer.Option(None, "--out", "-o", dir_okay=False, help="Stats TSV."),
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Corpus size, mean conversation length and mean utterance length, per label."""
    _configure_logging(verbose, quiet)
    with _cli_errors(), input_path.open("rb") as f:
        frame = corpus_statistics(c for _, c in iter_corpus(f))
    _print_frame(frame, f"{input_path.name}")
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        frame.write_csv(out, separator="\t")


@app.command(name="example-data")
def example_data(
    out: Path = OutputOption,
    n: int = typer.Option(20, "--n", "-n", min=0, help="Synthetic conversations to generate."),
    seed: int = SeedOption,
    verbose: int = VerboseOption,
    quiet: int = QuietOption,
) -> None:
    """Write a synthetic coherent corpus (plus the worked example conversation)."""
    _configure_logging(verbose, quiet)
    make_example_data(out, n=n, seed=seed)


if __name__ == "__main__":
    app()
