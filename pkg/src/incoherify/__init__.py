"""
Provides top-level imports
"""

from incoherify import (
    amr,
    cli,
    config,
    dialogue,
    errors,
    evaluation,
    examples,
    hashing,
    knowledge,
    log,
    manipulate,
    pipeline,
    progress,
    proxy,
    typing,
)
from incoherify.amr import (
    AmrGraph,
    Constant,
    ValidationReport,
    canonical_form,
    is_isomorphic,
    parse,
    serialize,
    validate,
)
from incoherify.cli import (
    app as cli_app,
)
from incoherify.config import (
    BaselineConfig,
    IncoherifyConfig,
    Manipulation,
    ManipulationConfig,
    ManipulationMode,
    ProxyConfig,
)
from incoherify.dialogue import (
    Conversation,
    Label,
    ManipulationRecord,
    ManipulationStep,
    Utterance,
    corpus_statistics,
    load_corpus,
    read_corpus,
    save_corpus,
    sentence_units,
    write_corpus,
)
from incoherify.errors import (
    IncoherifyError,
)
from incoherify.evaluation import (
    ScoreTable,
    accuracy,
    aggregate_annotations,
    correlation_report,
    cross_manipulation_matrix,
    spearman,
)
from incoherify.examples import (
    make_example_corpus,
    make_example_data,
    worked_example,
)
from incoherify.knowledge import (
    AntonymLexicon,
    bundled_lexicon,
    load_lexicon,
)
from incoherify.log import (
    set_log_level,
    setup_logger,
)
from incoherify.manipulate import (
    Rng,
    apply_baseline,
    apply_pipeline,
    contradict,
    coref_inconsistency,
    decrease_engagement,
    irrelevancy,
    replay,
)
from incoherify.pipeline import (
    IncoherifyPipeline,
)
from incoherify.progress import (
    ProgressCallback,
    ProgressEvent,
)
from incoherify.proxy import (
    LinearModel,
    featurize,
    load_model,
    save_model,
    score,
    train,
)

__all__ = [
    "AmrGraph",
    "AntonymLexicon",
    "BaselineConfig",
    "Constant",
    "Conversation",
    "IncoherifyConfig",
    "IncoherifyError",
    "IncoherifyPipeline",
    "Label",
    "LinearModel",
    "Manipulation",
    "ManipulationConfig",
    "ManipulationMode",
    "ManipulationRecord",
    "ManipulationStep",
    "ProgressCallback",
    "ProgressEvent",
    "ProxyConfig",
    "Rng",
    "ScoreTable",
    "Utterance",
    "ValidationReport",
    "accuracy",
    "aggregate_annotations",
    "amr",
    "apply_baseline",
    "apply_pipeline",
    "bundled_lexicon",
    "canonical_form",
    "cli",
    "cli_app",
    "config",
    "contradict",
    "coref_inconsistency",
    "corpus_statistics",
    "correlation_report",
    "cross_manipulation_matrix",
    "decrease_engagement",
    "dialogue",
    "errors",
    "evaluation",
    "examples",
    "featurize",
    "hashing",
    "irrelevancy",
    "is_isomorphic",
    "knowledge",
    "load_corpus",
    "load_lexicon",
    "load_model",
    "log",
    "make_example_corpus",
    "make_example_data",
    "manipulate",
    "parse",
    "pipeline",
    "progress",
    "proxy",
    "read_corpus",
    "replay",
    "save_corpus",
    "save_model",
    "score",
    "sentence_units",
    "serialize",
    "set_log_level",
    "setup_logger",
    "spearman",
    "train",
    "typing",
    "validate",
    "worked_example",
    "write_corpus",
]
